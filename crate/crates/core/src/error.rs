use thiserror::Error;

/// Errors raised by the arithmetic and geometry routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("residue field of {0} is not Q; residue values are unsupported there")]
    UnsupportedResidueField(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular curve: discriminant vanishes identically")]
    SingularCurve,

    #[error("Kodaira classification failed at {place}: valuations (c4, c6, disc) = ({c4}, {c6}, {disc})")]
    ClassificationFailure {
        place: String,
        c4: String,
        c6: String,
        disc: i64,
    },

    #[error("degenerate point: {0}")]
    DegeneratePoint(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
