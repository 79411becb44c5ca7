//! The 2-descent maps for `y² = x(x − p)(x − q)`.
//!
//! `δ: E(K)/2E(K) → (K*/K*²)²` sends a point `M` to `(x(M) − q, x(M) − p)`, and
//! `γ(f, g) = (x − p, f) + (x − q, g)`; the composite `γ∘δ` vanishes.

use std::fmt;

use crate::brauer::{BrauerClass, CurveArg};
use crate::elliptic::SplitCurve;
use crate::error::{invalid, Result};
use crate::exactalg::RationalFunction;
use crate::squareclass::{class_of, in_span, independent, FieldMode, SpanCertificate};

pub use crate::squareclass::DescentPair;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Zero,
    /// `P = (p, 0)`.
    TwoTorsionP,
    /// `Q = (q, 0)`.
    TwoTorsionQ,
    /// `(0, 0) = P + Q`.
    TwoTorsionZero,
    Affine { x: RationalFunction, y: RationalFunction },
}

impl CurvePoint {
    /// An affine point, checked against the curve equation.
    pub fn affine(curve: &SplitCurve, x: RationalFunction, y: RationalFunction) -> Result<Self> {
        if &y * &y != curve.rhs(&x) {
            return invalid(format!("({x}, {y}) is not on the curve"));
        }
        Ok(CurvePoint::Affine { x, y })
    }

    pub const TORSION: [CurvePoint; 4] = [
        CurvePoint::Zero,
        CurvePoint::TwoTorsionP,
        CurvePoint::TwoTorsionQ,
        CurvePoint::TwoTorsionZero,
    ];
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Zero => write!(f, "O"),
            CurvePoint::TwoTorsionP => write!(f, "P"),
            CurvePoint::TwoTorsionQ => write!(f, "Q"),
            CurvePoint::TwoTorsionZero => write!(f, "P+Q"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Rational functions representing `δ(M)` before reduction mod squares.
pub fn delta_representatives(
    m: &CurvePoint,
    curve: &SplitCurve,
) -> Result<(RationalFunction, RationalFunction)> {
    let (p, q) = (curve.p(), curve.q());
    let at_p = || (p - q, p * &(p - q));
    let at_q = || (q * &(q - p), q - p);
    Ok(match m {
        CurvePoint::Zero => (RationalFunction::one(), RationalFunction::one()),
        CurvePoint::TwoTorsionP => at_p(),
        CurvePoint::TwoTorsionQ => at_q(),
        CurvePoint::TwoTorsionZero => {
            let (a, b) = at_p();
            let (c, d) = at_q();
            (a * c, b * d)
        }
        CurvePoint::Affine { x, y } => {
            if y * y != curve.rhs(x) {
                return invalid(format!("{m} is not on the curve"));
            }
            if x == p {
                return delta_representatives(&CurvePoint::TwoTorsionP, curve);
            }
            if x == q {
                return delta_representatives(&CurvePoint::TwoTorsionQ, curve);
            }
            if x.is_zero() {
                return delta_representatives(&CurvePoint::TwoTorsionZero, curve);
            }
            (x - q, x - p)
        }
    })
}

pub fn delta(m: &CurvePoint, curve: &SplitCurve, mode: FieldMode) -> Result<DescentPair> {
    let (f, g) = delta_representatives(m, curve)?;
    DescentPair::of(&f, &g, mode)
}

/// `γ(f, g) = (x − p, f) + (x − q, g)`, dropping symbols whose coefficient
/// is a square in `Q(t)`.
pub fn gamma(f: &RationalFunction, g: &RationalFunction, curve: &SplitCurve) -> Result<BrauerClass> {
    if f.is_zero() || g.is_zero() {
        return invalid("gamma needs nonzero arguments");
    }
    let mut symbols = Vec::new();
    for (shift, h) in [(curve.p(), f), (curve.q(), g)] {
        if !class_of(h, FieldMode::RationalConstants)?.is_zero() {
            symbols.push((CurveArg::x_minus(shift.clone()), h.clone()));
        }
    }
    BrauerClass::new(curve.clone(), symbols)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Transcendental,
    AlgebraicOverC,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Transcendental => "transcendental",
            Verdict::AlgebraicOverC => "algebraic over C",
            Verdict::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscendenceReport {
    pub verdict: Verdict,
    /// `(class_of(f), class_of(g))` over `C(t)`.
    pub target: DescentPair,
    /// `δ(P)` and `δ(Q)` over `C(t)`.
    pub kernel_basis: Vec<DescentPair>,
    pub kernel_basis_independent: bool,
    pub certificate: SpanCertificate,
    pub reason: String,
}

/// Decides whether `γ(f, g)` stays nonzero over `C(t)`.
///
/// With Mordell–Weil rank 0 over `C(t)` and `δ(P)`, `δ(Q)` independent, the
/// image of `δ` is exactly their span, so by exactness the kernel of `γ` is
/// that span too. Otherwise the kernel is not known and the verdict is
/// [`Verdict::Unknown`].
pub fn transcendence_test(
    f: &RationalFunction,
    g: &RationalFunction,
    curve: &SplitCurve,
    mw_rank_bound: i64,
) -> Result<TranscendenceReport> {
    let mode = FieldMode::ConstantsAreSquares;
    let target = DescentPair::of(f, g, mode)?;
    let kernel_basis = vec![
        delta(&CurvePoint::TwoTorsionP, curve, mode)?,
        delta(&CurvePoint::TwoTorsionQ, curve, mode)?,
    ];
    let kernel_basis_independent = independent(&kernel_basis)?;
    let certificate = in_span(&target, &kernel_basis)?;
    let (verdict, reason) = if mw_rank_bound != 0 {
        (Verdict::Unknown, format!("Mordell-Weil rank bound is {mw_rank_bound}, not 0"))
    } else if !kernel_basis_independent {
        (Verdict::Unknown, "delta(P) and delta(Q) are dependent".to_string())
    } else if certificate.in_span {
        (Verdict::AlgebraicOverC, "target lies in the span of delta(P), delta(Q)".to_string())
    } else {
        (Verdict::Transcendental, "target is outside the kernel of gamma over C(t)".to_string())
    };
    Ok(TranscendenceReport {
        verdict,
        target,
        kernel_basis,
        kernel_basis_independent,
        certificate,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, Polynomial};
    use crate::pencil;

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from(Polynomial::from_i64s(c))
    }

    #[test]
    fn delta_of_p_and_q_over_c() {
        let c = pencil::curve();
        let mode = FieldMode::ConstantsAreSquares;
        assert_eq!(
            delta(&CurvePoint::TwoTorsionP, &c, mode).unwrap().to_string(),
            "({t}, {t, t-1, t+3})"
        );
        assert_eq!(
            delta(&CurvePoint::TwoTorsionQ, &c, mode).unwrap().to_string(),
            "({t, t+1, t-3}, {t})"
        );
        assert!(delta(&CurvePoint::Zero, &c, mode).unwrap().is_zero());
    }

    #[test]
    fn delta_of_p_over_q() {
        let c = pencil::curve();
        let d = delta(&CurvePoint::TwoTorsionP, &c, FieldMode::RationalConstants).unwrap();
        // 48t = 3·4²·t and 144·t(t−1)³(t+3) = 12²·t(t−1)³(t+3)
        assert_eq!(d.to_string(), "({3, t}, {t, t-1, t+3})");
    }

    #[test]
    fn delta_is_additive_on_torsion() {
        let c = pencil::curve();
        let mode = FieldMode::ConstantsAreSquares;
        let d = |m: &CurvePoint| delta(m, &c, mode).unwrap();
        let sum = d(&CurvePoint::TwoTorsionP).add(&d(&CurvePoint::TwoTorsionQ)).unwrap();
        assert_eq!(sum, d(&CurvePoint::TwoTorsionZero));
        let affine = CurvePoint::affine(&c, RationalFunction::zero(), RationalFunction::zero()).unwrap();
        assert_eq!(d(&affine), d(&CurvePoint::TwoTorsionZero));
    }

    #[test]
    fn affine_points_are_checked() {
        let c = pencil::curve();
        assert!(CurvePoint::affine(&c, RationalFunction::one(), RationalFunction::one()).is_err());
        let bad = CurvePoint::Affine { x: RationalFunction::one(), y: RationalFunction::one() };
        assert!(delta(&bad, &c, FieldMode::ConstantsAreSquares).is_err());
    }

    #[test]
    fn gamma_shapes() {
        let c = pencil::curve();
        assert!(gamma(&RationalFunction::one(), &RationalFunction::one(), &c).unwrap().is_empty());
        let single = gamma(&rf(&[0, 1]), &rf(&[4]), &c).unwrap();
        assert_eq!(single.to_string(), "(x-p, t)");
        assert!(gamma(&RationalFunction::zero(), &RationalFunction::one(), &c).is_err());
    }

    #[test]
    fn transcendence_verdicts() {
        let c = pencil::curve();
        let v = |f: &RationalFunction, g: &RationalFunction, b| {
            transcendence_test(f, g, &c, b).unwrap().verdict
        };
        assert_eq!(v(&pencil::f_arg(), &pencil::g_arg(), 0), Verdict::Transcendental);
        let (dp1, dp2) = delta_representatives(&CurvePoint::TwoTorsionP, &c).unwrap();
        assert_eq!(v(&dp1, &dp2, 0), Verdict::AlgebraicOverC);
        let one = RationalFunction::one();
        assert_eq!(v(&one, &one, 0), Verdict::AlgebraicOverC);
        assert_eq!(v(&pencil::f_arg(), &pencil::g_arg(), 1), Verdict::Unknown);
        let k = RationalFunction::constant(int(7));
        assert_eq!(v(&(&pencil::f_arg() * &k), &pencil::g_arg(), 0), Verdict::Transcendental);
    }
}
