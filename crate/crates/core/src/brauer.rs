//! Brauer classes on the surface `y² = x(x − p)(x − q)`: formal sums of
//! quaternion symbols `(x − s, f)`, their values at local points, and the
//! adelic Brauer–Manin pairing.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::descent::gamma;
use crate::elliptic::SplitCurve;
use crate::error::{invalid, Error, Result};
use crate::exactalg::{fmt_rational, int, poly_factor, rat, rat_is_square, Rational, RationalFunction};
use crate::hilbert::{hilbert_symbol, qp_is_square, RationalPlace, SymbolValue};
use crate::pencil;

/// The first entry of a symbol: the function `x − shift` on the surface.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveArg {
    pub shift: RationalFunction,
}

impl CurveArg {
    pub fn x_minus(shift: RationalFunction) -> Self {
        CurveArg { shift }
    }

    pub fn x() -> Self {
        CurveArg { shift: RationalFunction::zero() }
    }
}

impl fmt::Display for CurveArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            write!(f, "x")
        } else {
            write!(f, "x - ({})", self.shift)
        }
    }
}

/// A formal `F2`-sum of symbols `(x − s_i, f_i)` on a split curve.
///
/// Symbols are kept in a canonical order; a symbol occurring twice cancels.
#[derive(Clone, Debug)]
pub struct BrauerClass {
    curve: SplitCurve,
    symbols: Vec<(CurveArg, RationalFunction)>,
}

impl BrauerClass {
    pub fn new(
        curve: SplitCurve,
        symbols: impl IntoIterator<Item = (CurveArg, RationalFunction)>,
    ) -> Result<Self> {
        let mut out: Vec<(CurveArg, RationalFunction)> = Vec::new();
        for (u, f) in symbols {
            if f.is_zero() {
                return invalid(format!("symbol ({u}, 0)"));
            }
            match out.iter().position(|s| s.0 == u && s.1 == f) {
                Some(i) => {
                    out.remove(i);
                }
                None => out.push((u, f)),
            }
        }
        // x - p first, then x - q, then x, then anything else
        let rank = |u: &CurveArg| {
            if u.shift == *curve.p() {
                0
            } else if u.shift == *curve.q() {
                1
            } else if u.shift.is_zero() {
                2
            } else {
                3
            }
        };
        out.sort_by(|a, b| (rank(&a.0), a).cmp(&(rank(&b.0), b)));
        Ok(BrauerClass { curve, symbols: out })
    }

    pub fn curve(&self) -> &SplitCurve {
        &self.curve
    }

    pub fn symbols(&self) -> &[(CurveArg, RationalFunction)] {
        &self.symbols
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Pull back along `t ↦ −t`.
    pub fn negate_var(&self) -> Self {
        BrauerClass::new(
            self.curve.negate_var(),
            self.symbols
                .iter()
                .map(|(u, f)| (CurveArg::x_minus(u.shift.negate_var()), f.negate_var())),
        )
        .expect("substitution keeps entries nonzero")
    }

    fn label(&self, u: &CurveArg) -> String {
        if u.shift == *self.curve.p() {
            "x-p".into()
        } else if u.shift == *self.curve.q() {
            "x-q".into()
        } else {
            u.to_string()
        }
    }
}

/// Equal as formal sums over the same curve; the curve is compared as the
/// unordered pair `{p, q}`.
impl PartialEq for BrauerClass {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.curve, &other.curve);
        let same_curve =
            (a.p() == b.p() && a.q() == b.q()) || (a.p() == b.q() && a.q() == b.p());
        let sorted = |c: &BrauerClass| {
            let mut s = c.symbols.clone();
            s.sort();
            s
        };
        same_curve && sorted(self) == sorted(other)
    }
}

impl Eq for BrauerClass {}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|(u, g)| format!("({}, {g})", self.label(u)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `A = (x − p, 6t(t + 1)) + (x − q, 6t(t − 1))` on the pencil.
pub fn build_class_a() -> BrauerClass {
    gamma(&pencil::f_arg(), &pencil::g_arg(), &pencil::curve()).expect("nonzero arguments")
}

/// A point of the surface over the completion of `Q` at `place`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SurfacePoint {
    /// The zero section, over any parameter.
    ZeroSection,
    Affine {
        t0: Rational,
        x0: Rational,
        place: RationalPlace,
    },
}

impl SurfacePoint {
    pub fn affine(t0: Rational, x0: Rational, place: RationalPlace) -> Self {
        SurfacePoint::Affine { t0, x0, place }
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfacePoint::ZeroSection => write!(f, "zero section"),
            SurfacePoint::Affine { t0, x0, place } => write!(
                f,
                "(x, t) = ({}, {}) over Q_{place}",
                fmt_rational(x0),
                fmt_rational(t0)
            ),
        }
    }
}

/// Values of `p` and `q` at `t0`, or a degenerate-point error at a pole.
fn fiber_data(curve: &SplitCurve, t0: &Rational) -> Result<(Rational, Rational)> {
    let at = |h: &RationalFunction| {
        h.eval(t0)
            .ok_or_else(|| Error::DegeneratePoint(format!("{h} has a pole at t = {}", fmt_rational(t0))))
    };
    Ok((at(curve.p())?, at(curve.q())?))
}

/// `x0(x0 − p(t0))(x0 − q(t0))`.
pub fn cubic_value(curve: &SplitCurve, t0: &Rational, x0: &Rational) -> Result<Rational> {
    let (p0, q0) = fiber_data(curve, t0)?;
    Ok(x0 * (x0 - &p0) * (x0 - &q0))
}

/// Whether `(x0, t0)` lifts to a point of the surface over `Q_v`.
pub fn is_local_point(curve: &SplitCurve, t0: &Rational, x0: &Rational, v: RationalPlace) -> Result<bool> {
    let r = cubic_value(curve, t0, x0)?;
    Ok(r.is_zero() || qp_is_square(&r, v)?)
}

/// Value of `x − s` at the point, replaced by its curve-relation substitute
/// when it vanishes or blows up. The substitute differs by `y²/(x − s)²`.
fn symbol_argument(
    curve: &SplitCurve,
    u: &CurveArg,
    t0: &Rational,
    x0: &Rational,
) -> Result<Rational> {
    let (p0, q0) = fiber_data(curve, t0)?;
    let direct = u.shift.eval(t0).map(|s| x0 - s).filter(|a| !a.is_zero());
    if let Some(a) = direct {
        return Ok(a);
    }
    let substitute = if u.shift == *curve.p() {
        Some(x0 * (x0 - &q0))
    } else if u.shift == *curve.q() {
        Some(x0 * (x0 - &p0))
    } else if u.shift.is_zero() {
        Some((x0 - &p0) * (x0 - &q0))
    } else {
        None
    };
    match substitute {
        Some(a) if !a.is_zero() => Ok(a),
        _ => Err(Error::DegeneratePoint(format!(
            "{u} and its substitute vanish at (x, t) = ({}, {})",
            fmt_rational(x0),
            fmt_rational(t0)
        ))),
    }
}

/// Local invariant of `c` at `m`, as `Plus` (0) or `Minus` (1/2).
pub fn evaluate_local(c: &BrauerClass, m: &SurfacePoint) -> Result<SymbolValue> {
    let SurfacePoint::Affine { t0, x0, place } = m else {
        return Ok(SymbolValue::Plus);
    };
    if !is_local_point(&c.curve, t0, x0, *place)? {
        return invalid(format!("{m} is not on the curve"));
    }
    let mut total = SymbolValue::Plus;
    for (u, f) in &c.symbols {
        let b = f
            .eval(t0)
            .filter(|b| !b.is_zero())
            .ok_or_else(|| Error::DegeneratePoint(format!("{f} vanishes or has a pole at t = {}", fmt_rational(t0))))?;
        let a = symbol_argument(&c.curve, u, t0, x0)?;
        total = total + hilbert_symbol(&a, &b, *place)?;
    }
    Ok(total)
}

/// An adelic point: the zero section everywhere except at finitely many places.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdelicPointSpec {
    pub overrides: BTreeMap<RationalPlace, SurfacePoint>,
}

impl AdelicPointSpec {
    pub fn with(mut self, place: RationalPlace, point: SurfacePoint) -> Self {
        self.overrides.insert(place, point);
        self
    }
}

/// `M₂ = (x, t) = (1, 2)` over `Q_2`.
pub fn witness_point() -> SurfacePoint {
    SurfacePoint::affine(int(2), int(1), RationalPlace::Prime(2))
}

/// The zero section away from 2 and `M₂` at 2.
pub fn obstructing_adelic_point() -> AdelicPointSpec {
    AdelicPointSpec::default().with(RationalPlace::Prime(2), witness_point())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    /// Invariants at the overridden places; all other places contribute 0.
    pub per_place: Vec<(RationalPlace, SymbolValue)>,
    pub sum: SymbolValue,
    pub obstructed: bool,
}

pub fn adelic_pairing(c: &BrauerClass, spec: &AdelicPointSpec) -> Result<ObstructionReport> {
    let mut per_place = Vec::new();
    for (v, m) in &spec.overrides {
        if let SurfacePoint::Affine { place, .. } = m {
            if place != v {
                return invalid(format!("point {m} registered at place {v}"));
            }
        }
        per_place.push((*v, evaluate_local(c, m)?));
    }
    let sum: SymbolValue = per_place.iter().map(|(_, s)| *s).sum();
    Ok(ObstructionReport {
        per_place,
        sum,
        obstructed: !sum.is_trivial(),
    })
}

/// Rationals `n/d` with `|n|, d ≤ height`, ordered by height, then value.
pub fn rationals_up_to(height: u32) -> Vec<Rational> {
    let h = height as i64;
    let mut out: Vec<(i64, Rational)> = Vec::new();
    for d in 1..=h {
        for n in -h..=h {
            if n.gcd(&d) == 1 {
                out.push((n.abs().max(d), rat(n, d)));
            }
        }
    }
    out.sort();
    out.into_iter().map(|(_, r)| r).collect()
}

fn rational_roots(f: &RationalFunction) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    for part in [f.numerator(), f.denominator()] {
        if part.is_constant() {
            continue;
        }
        for (pi, _) in poly_factor(part)?.factors {
            if pi.degree() == Some(1) {
                out.push(-pi.coeff(0));
            }
        }
    }
    Ok(out)
}

/// Parameters excluded from sampling: bad fibers of the curve and zeros or
/// poles of the symbol coefficients.
pub fn excluded_parameters(c: &BrauerClass) -> Result<Vec<Rational>> {
    let disc = c.curve.weierstrass().invariants()?.disc;
    let mut out = rational_roots(&disc)?;
    for (u, f) in &c.symbols {
        out.extend(rational_roots(f)?);
        out.extend(rational_roots(&u.shift.denominator().clone().into())?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub t0: Rational,
    pub x0: Rational,
    pub value: SymbolValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingReport {
    pub place: RationalPlace,
    pub height: u32,
    pub requested: usize,
    pub samples: Vec<Sample>,
    pub excluded_parameters: Vec<Rational>,
    /// Local points skipped because evaluation degenerated there.
    pub degenerate: usize,
}

impl SamplingReport {
    pub fn valid(&self) -> usize {
        self.samples.len()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| !s.value.is_trivial())
    }

    pub fn all_vanish(&self) -> bool {
        self.witnesses().next().is_none()
    }

    pub fn enough(&self) -> bool {
        self.valid() >= self.requested
    }
}

/// Evaluates `c` at up to `samples` local points `(x0, t0)` of bounded height,
/// scanning candidates in order of increasing height.
pub fn sample_vanishing(
    c: &BrauerClass,
    place: RationalPlace,
    samples: usize,
    height: u32,
) -> Result<SamplingReport> {
    if samples == 0 {
        return invalid("sampling budget must be positive");
    }
    let excluded = excluded_parameters(c)?;
    let values = rationals_up_to(height);
    let mut report = SamplingReport {
        place,
        height,
        requested: samples,
        samples: Vec::new(),
        excluded_parameters: excluded.clone(),
        degenerate: 0,
    };
    let params: Vec<&Rational> = values.iter().filter(|t| !excluded.contains(t)).collect();
    // Walk pairs by increasing max(rank of t0, rank of x0) so small points come first.
    'outer: for level in 0..values.len().max(params.len()) {
        let mut batch: Vec<(&Rational, &Rational)> = Vec::new();
        if let Some(t0) = params.get(level) {
            for x0 in values.iter().take(level + 1) {
                batch.push((t0, x0));
            }
        }
        if let Some(x0) = values.get(level) {
            for t0 in params.iter().take(level) {
                batch.push((t0, x0));
            }
        }
        for (t0, x0) in batch {
            if !is_local_point(&c.curve, t0, x0, place)? {
                continue;
            }
            let m = SurfacePoint::affine(t0.clone(), x0.clone(), place);
            match evaluate_local(c, &m) {
                Ok(value) => report.samples.push(Sample {
                    t0: t0.clone(),
                    x0: x0.clone(),
                    value,
                }),
                Err(Error::DegeneratePoint(_)) => report.degenerate += 1,
                Err(e) => return Err(e),
            }
            if report.samples.len() >= samples {
                break 'outer;
            }
        }
    }
    Ok(report)
}

/// `Σ_v inv_v c(M)` over every place of `Q` at a rational point `M`.
///
/// Only the real place and primes dividing some symbol entry can contribute.
pub fn global_invariant_sum(c: &BrauerClass, t0: &Rational, x0: &Rational) -> Result<SymbolValue> {
    let r = cubic_value(&c.curve, t0, x0)?;
    if !r.is_zero() && !rat_is_square(&r)? {
        return invalid("not a rational point");
    }
    let mut total = SymbolValue::Plus;
    for (u, f) in &c.symbols {
        let b = f
            .eval(t0)
            .filter(|b| !b.is_zero())
            .ok_or_else(|| Error::DegeneratePoint(format!("{f} at t = {}", fmt_rational(t0))))?;
        let a = symbol_argument(&c.curve, u, t0, x0)?;
        let report = crate::hilbert::product_formula_check(&a, &b)?;
        total = total + report.product;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Polynomial;

    fn a() -> BrauerClass {
        build_class_a()
    }

    #[test]
    fn class_a_shape() {
        let c = a();
        assert_eq!(c.symbols().len(), 2);
        assert_eq!(c.to_string(), "(x-p, 6*t^2+6*t) + (x-q, 6*t^2-6*t)");
        assert_eq!(c.negate_var(), c);
    }

    #[test]
    fn witness_at_two() {
        assert_eq!(evaluate_local(&a(), &witness_point()).unwrap(), SymbolValue::Minus);
        let at3 = SurfacePoint::affine(int(2), int(1), RationalPlace::Prime(3));
        assert_eq!(evaluate_local(&a(), &at3).unwrap(), SymbolValue::Plus);
    }

    #[test]
    fn two_torsion_substitute() {
        // p(2) = 15: x - p vanishes, replaced by x(x - q)
        let m = SurfacePoint::affine(int(2), int(15), RationalPlace::Prime(2));
        assert_eq!(evaluate_local(&a(), &m).unwrap(), SymbolValue::Plus);
    }

    #[test]
    fn zero_section_and_pairing() {
        assert_eq!(evaluate_local(&a(), &SurfacePoint::ZeroSection).unwrap(), SymbolValue::Plus);
        let r = adelic_pairing(&a(), &obstructing_adelic_point()).unwrap();
        assert_eq!(r.sum, SymbolValue::Minus);
        assert!(r.obstructed);
        let r = adelic_pairing(&a(), &AdelicPointSpec::default()).unwrap();
        assert!(!r.obstructed);
    }

    #[test]
    fn off_curve_point_is_rejected() {
        // x = 2, t = 2: 2 * (-13) * 83 < 0 has no real square root
        let m = SurfacePoint::affine(int(2), int(2), RationalPlace::Real);
        assert!(matches!(evaluate_local(&a(), &m), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn coefficient_zero_is_degenerate() {
        // t = 0: the fiber has x-p = x+9 and coefficient 6t(t+1) = 0
        let m = SurfacePoint::affine(int(0), int(1), RationalPlace::Prime(5));
        assert!(matches!(evaluate_local(&a(), &m), Err(Error::DegeneratePoint(_))));
    }

    #[test]
    fn exclusions_for_the_pencil() {
        let ex = excluded_parameters(&a()).unwrap();
        assert_eq!(ex, vec![int(-3), int(-1), int(0), int(1), int(3)]);
    }

    #[test]
    fn rational_enumeration() {
        let r = rationals_up_to(2);
        assert_eq!(r[..3], [int(-1), int(0), int(1)]);
        assert_eq!(r.len(), 7);
        assert!(r.contains(&rat(-1, 2)));
    }

    #[test]
    fn symbols_cancel_in_pairs() {
        let s = CurveArg::x_minus(Polynomial::from_i64s(&[0, 1]).into());
        let f = RationalFunction::t();
        let c = BrauerClass::new(pencil::curve(), [(s.clone(), f.clone()), (s, f)]).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.to_string(), "0");
    }
}
