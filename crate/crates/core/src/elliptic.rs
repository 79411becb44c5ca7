//! Elliptic curves over `Q(t)`: Weierstrass invariants, local minimal models,
//! Kodaira fiber types and the numerology of the associated elliptic surface.
//!
//! All residue fields have characteristic zero, so the fiber type at a place
//! is determined by the valuations of `c4` and `Δ` on a minimal model.

use std::fmt;


use crate::error::{invalid, Error, Result};
use crate::exactalg::{int, RationalFunction};
use crate::funcfield::{places_of_support, valuation, Place};

/// Long Weierstrass form `y² + a1xy + a3y = x³ + a2x² + a4x + a6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: RationalFunction,
    pub a2: RationalFunction,
    pub a3: RationalFunction,
    pub a4: RationalFunction,
    pub a6: RationalFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub c4: RationalFunction,
    pub c6: RationalFunction,
    pub disc: RationalFunction,
}

fn k(n: i64) -> RationalFunction {
    RationalFunction::constant(int(n))
}

impl WeierstrassCurve {
    /// Fails with [`Error::SingularCurve`] when the discriminant vanishes.
    pub fn new(
        a1: RationalFunction,
        a2: RationalFunction,
        a3: RationalFunction,
        a4: RationalFunction,
        a6: RationalFunction,
    ) -> Result<Self> {
        let c = WeierstrassCurve { a1, a2, a3, a4, a6 };
        c.invariants()?;
        Ok(c)
    }

    /// `y² = x³ + a4·x + a6`.
    pub fn short(a4: RationalFunction, a6: RationalFunction) -> Result<Self> {
        let z = RationalFunction::zero();
        Self::new(z.clone(), z.clone(), z, a4, a6)
    }

    /// `c4`, `c6` and `Δ`; they satisfy `c4³ − c6² = 1728Δ`.
    pub fn invariants(&self) -> Result<Invariants> {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + k(4) * a2;
        let b4 = k(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + k(4) * a6;
        let b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - k(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + k(36) * &b2 * &b4 - k(216) * &b6;
        let disc = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6
            + k(9) * &b2 * &b4 * &b6;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Invariants { c4, c6, disc })
    }

    /// The model with `(x, y) ↦ (u²x, u³y)`, i.e. `a_i ↦ a_i / u^i`.
    pub fn rescale(&self, u: &RationalFunction) -> Result<Self> {
        if u.is_zero() {
            return invalid("rescaling by zero");
        }
        let scale = |a: &RationalFunction, i: i32| -> Result<RationalFunction> {
            Ok(a * &u.pow(-i)?)
        };
        Ok(WeierstrassCurve {
            a1: scale(&self.a1, 1)?,
            a2: scale(&self.a2, 2)?,
            a3: scale(&self.a3, 3)?,
            a4: scale(&self.a4, 4)?,
            a6: scale(&self.a6, 6)?,
        })
    }

    /// The curve over `Q(t)` obtained by `t ↦ −t`.
    pub fn negate_var(&self) -> Self {
        WeierstrassCurve {
            a1: self.a1.negate_var(),
            a2: self.a2.negate_var(),
            a3: self.a3.negate_var(),
            a4: self.a4.negate_var(),
            a6: self.a6.negate_var(),
        }
    }
}

/// `y² = x(x − p)(x − q)` with distinct nonzero `p`, `q` in `Q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCurve {
    p: RationalFunction,
    q: RationalFunction,
}

impl SplitCurve {
    pub fn new(p: RationalFunction, q: RationalFunction) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return invalid("split form needs p, q nonzero");
        }
        if p == q {
            return invalid("split form needs p != q");
        }
        Ok(SplitCurve { p, q })
    }

    pub fn p(&self) -> &RationalFunction {
        &self.p
    }

    pub fn q(&self) -> &RationalFunction {
        &self.q
    }

    /// `x(x − p)(x − q)` evaluated at a function `x`.
    pub fn rhs(&self, x: &RationalFunction) -> RationalFunction {
        x * &(x - &self.p) * (x - &self.q)
    }

    pub fn weierstrass(&self) -> WeierstrassCurve {
        let z = RationalFunction::zero();
        WeierstrassCurve {
            a1: z.clone(),
            a2: -(&self.p + &self.q),
            a3: z.clone(),
            a4: &self.p * &self.q,
            a6: z,
        }
    }

    pub fn negate_var(&self) -> Self {
        SplitCurve {
            p: self.p.negate_var(),
            q: self.q.negate_var(),
        }
    }
}

impl fmt::Display for SplitCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x(x - p)(x - q), p = {}, q = {}", self.p, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    Good,
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Number of irreducible components of the geometric fiber.
    pub fn components(self) -> u32 {
        match self {
            KodairaType::Good => 1,
            KodairaType::I(n) => n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => 5 + n,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// Topological Euler number of the geometric fiber.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::Good => 0,
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => 6 + n,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(_))
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::Good => write!(f, "I_0"),
            KodairaType::I(n) => write!(f, "I_{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I_{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

/// Valuations of `(c4, c6, Δ)`; `None` stands for `+∞` (the invariant vanishes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalValuations {
    pub c4: Option<i64>,
    pub c6: Option<i64>,
    pub disc: i64,
}

impl fmt::Display for LocalValuations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", fmt_val(self.c4), fmt_val(self.c6), self.disc)
    }
}

pub fn fmt_val(v: Option<i64>) -> String {
    v.map_or_else(|| "inf".to_string(), |x| x.to_string())
}

fn opt_valuation(v: &Place, f: &RationalFunction) -> Result<Option<i64>> {
    if f.is_zero() {
        Ok(None)
    } else {
        valuation(v, f).map(Some)
    }
}

pub fn local_valuations(v: &Place, c: &WeierstrassCurve) -> Result<LocalValuations> {
    let inv = c.invariants()?;
    Ok(LocalValuations {
        c4: opt_valuation(v, &inv.c4)?,
        c6: opt_valuation(v, &inv.c6)?,
        disc: valuation(v, &inv.disc)?,
    })
}

/// The largest `s` with `v(c4) ≥ 4s`, `v(c6) ≥ 6s`, `v(Δ) ≥ 12s`.
fn minimal_shift(vals: &LocalValuations) -> i64 {
    let mut s = vals.disc.div_euclid(12);
    if let Some(a) = vals.c4 {
        s = s.min(a.div_euclid(4));
    }
    if let Some(b) = vals.c6 {
        s = s.min(b.div_euclid(6));
    }
    s
}

fn uniformizer(v: &Place) -> RationalFunction {
    match v {
        Place::Finite(pi) => RationalFunction::from(pi.clone()),
        Place::Infinity => RationalFunction::t().inv().expect("t nonzero"),
    }
}

/// Rescales `c` by a power of the uniformizer at `v` so that its invariants
/// are integral at `v` and not all of `v(c4) ≥ 4`, `v(c6) ≥ 6`, `v(Δ) ≥ 12`.
pub fn minimalize_at(v: &Place, c: &WeierstrassCurve) -> Result<WeierstrassCurve> {
    let s = minimal_shift(&local_valuations(v, c)?);
    if s == 0 {
        return Ok(c.clone());
    }
    c.rescale(&uniformizer(v).pow(s as i32)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub place: Place,
    pub kodaira: KodairaType,
    pub components: u32,
    pub euler: u32,
    pub minimal_valuations: LocalValuations,
}

fn classify(vals: &LocalValuations) -> Option<KodairaType> {
    use KodairaType::*;
    let a = vals.c4.unwrap_or(i64::MAX);
    let d = vals.disc;
    if d < 0 || a < 0 {
        return None;
    }
    if d == 0 {
        return Some(Good);
    }
    if a == 0 {
        return Some(I(d as u32));
    }
    Some(match (a, d) {
        (_, 2) => II,
        (1, 3) => III,
        (2.., 4) => IV,
        (2.., 6) => IStar(0),
        (2, d) if d > 6 => IStar((d - 6) as u32),
        (3.., 8) => IVStar,
        (3, 9) => IIIStar,
        (4.., 10) => IIStar,
        _ => return None,
    })
}

/// Kodaira type of the fiber at `v`, read off a minimal model.
pub fn kodaira_type_at(v: &Place, c: &WeierstrassCurve) -> Result<FiberReport> {
    let minimal = minimalize_at(v, c)?;
    let vals = local_valuations(v, &minimal)?;
    let kodaira = classify(&vals).ok_or_else(|| Error::ClassificationFailure {
        place: v.to_string(),
        c4: fmt_val(vals.c4),
        c6: fmt_val(vals.c6),
        disc: vals.disc,
    })?;
    Ok(FiberReport {
        place: v.clone(),
        kodaira,
        components: kodaira.components(),
        euler: kodaira.euler(),
        minimal_valuations: vals,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceReport {
    /// Singular fibers, in place order.
    pub fibers: Vec<FiberReport>,
    pub euler: i64,
    pub chi: i64,
    pub is_k3: bool,
    /// Rank of the lattice spanned by the zero section, a fiber, and fiber components.
    pub rank_r: i64,
    pub picard_bound: i64,
    pub mw_rank_bound: i64,
    pub semistable: bool,
}

impl SurfaceReport {
    /// The Picard bound is attained by the trivial lattice, forcing Mordell–Weil rank 0.
    pub fn mw_rank_zero_established(&self) -> bool {
        self.mw_rank_bound == 0
    }
}

/// Classifies every singular fiber and aggregates the surface invariants.
///
/// A place of degree `d` contributes `d` geometric fibers of its type.
pub fn classify_surface(c: &WeierstrassCurve, picard_bound: i64) -> Result<SurfaceReport> {
    let inv = c.invariants()?;
    let mut support: Vec<RationalFunction> = vec![inv.disc.clone()];
    support.extend([inv.c4, inv.c6].into_iter().filter(|f| !f.is_zero()));
    let mut places = places_of_support(&support)?;
    if !places.contains(&Place::Infinity) {
        places.push(Place::Infinity);
    }

    let mut fibers = Vec::new();
    for v in &places {
        let report = kodaira_type_at(v, c)?;
        log::debug!("fiber at {v}: {} {}", report.kodaira, report.minimal_valuations);
        if report.kodaira != KodairaType::Good {
            fibers.push(report);
        }
    }
    let weight = |f: &FiberReport| f.place.degree() as i64;
    let euler: i64 = fibers.iter().map(|f| weight(f) * f.euler as i64).sum();
    if euler % 12 != 0 {
        return Err(Error::ClassificationFailure {
            place: "surface".into(),
            c4: "-".into(),
            c6: "-".into(),
            disc: euler,
        });
    }
    let chi = euler / 12;
    let rank_r = 2 + fibers
        .iter()
        .map(|f| weight(f) * (f.components as i64 - 1))
        .sum::<i64>();
    Ok(SurfaceReport {
        semistable: fibers.iter().all(|f| f.kodaira.is_multiplicative()),
        is_k3: chi == 2 && euler == 24,
        mw_rank_bound: picard_bound - rank_r,
        fibers,
        euler,
        chi,
        rank_r,
        picard_bound,
    })
}

impl Invariants {
    /// `c4³ − c6² − 1728Δ`, identically zero.
    pub fn syzygy_defect(&self) -> RationalFunction {
        &self.c4 * &self.c4 * &self.c4 - &self.c6 * &self.c6 - k(1728) * &self.disc
    }
}
