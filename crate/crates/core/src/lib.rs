//! Exact arithmetic and arithmetic-geometry routines for a pencil of elliptic
//! curves over `Q(t)` carrying a transcendental Brauer class.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactalg`]: rationals, polynomials and rational functions over `Q`,
//!   factorization in `Q[t]` and `Z`.
//! - [`funcfield`]: places of the projective line over `Q`, valuations and
//!   unit parts.
//! - [`squareclass`]: square classes `K*/K*²` as `F2` vectors.
//! - [`hilbert`]: local Hilbert symbols over `Q`.
//! - [`residues`]: tame symbols and unramifiedness of quaternion classes over `Q(t)`.
//! - [`elliptic`]: Weierstrass invariants, Kodaira types, surface numerology.
//! - [`descent`]: the 2-descent maps and the transcendence test.
//! - [`brauer`]: local evaluation of Brauer classes and the adelic pairing.
//! - [`expr`]: the polynomial expression language used by the CLI.
//! - [`pencil`]: the concrete K3 pencil `y² = x(x − p)(x − q)`.
//! - [`reproduce`]: the end-to-end list of checks on the pencil.

pub mod brauer;
pub mod descent;
pub mod elliptic;
pub mod error;
pub mod exactalg;
pub mod expr;
pub mod funcfield;
pub mod hilbert;
pub mod pencil;
pub mod reproduce;
pub mod residues;
pub mod squareclass;

pub use error::{Error, Result};
