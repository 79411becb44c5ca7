//! The K3 pencil `y² = x(x − p)(x − q)` with
//! `p = 3(t − 1)³(t + 3)` and `q = p(−t)`, and the data attached to it.

use crate::exactalg::{int, Polynomial, RationalFunction};
use crate::elliptic::SplitCurve;
use crate::residues::QtBrauerClass;

/// Upper bound for the Picard number of a complex K3 surface.
pub const PICARD_BOUND: i64 = 20;

/// `3(t − 1)³(t + 3)`.
pub fn p() -> Polynomial {
    Polynomial::linear(&int(1)).pow(3) * Polynomial::linear(&int(-3)) * Polynomial::constant(int(3))
}

/// `3(t + 1)³(t − 3)`.
pub fn q() -> Polynomial {
    p().scale_var(&int(-1))
}

pub fn curve() -> SplitCurve {
    SplitCurve::new(p().into(), q().into()).expect("p and q are distinct and nonzero")
}

/// `6t(t + 1)`, paired with `x − p`.
pub fn f_arg() -> RationalFunction {
    (Polynomial::from_i64s(&[0, 6]) * Polynomial::linear(&int(-1))).into()
}

/// `6t(t − 1)`, paired with `x − q`.
pub fn g_arg() -> RationalFunction {
    (Polynomial::from_i64s(&[0, 6]) * Polynomial::linear(&int(1))).into()
}

/// `(−p, 6t(t + 1)) + (−q, 6t(t − 1))`: the class over `Q(t)` whose residues
/// govern the vertical ramification of the class on the surface.
pub fn vertical_class() -> QtBrauerClass {
    QtBrauerClass::new([
        (-RationalFunction::from(p()), f_arg()),
        (-RationalFunction::from(q()), g_arg()),
    ])
    .expect("nonzero entries")
}
