//! Residues of quaternion classes over `Q(t)` at places of `P¹_Q`.
//!
//! The residue of `(f, g)` at `v` is the tame symbol
//! `(−1)^{v(f)v(g)} [f̃]^{v(g)} [g̃]^{v(f)}` in `κ*/κ*²`, where `f̃ = f·π^{−v(f)}`.

use std::fmt;

use crate::error::{invalid, Result};
use crate::exactalg::{rat_is_square, Polynomial, Rational, RationalFunction};
use crate::funcfield::{places_of_support, unit_part, valuation, Place};
use crate::squareclass::{class_of, class_of_rational, BasisElement, FieldMode, SquareClassVector};

/// A formal `F2`-sum of quaternion symbols `(f, g)` over `Q(t)`.
///
/// Stored in canonical order; a pair occurring twice cancels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QtBrauerClass {
    symbols: Vec<(RationalFunction, RationalFunction)>,
}

impl QtBrauerClass {
    pub fn new(
        symbols: impl IntoIterator<Item = (RationalFunction, RationalFunction)>,
    ) -> Result<Self> {
        let mut out: Vec<(RationalFunction, RationalFunction)> = Vec::new();
        for (f, g) in symbols {
            if f.is_zero() || g.is_zero() {
                return invalid(format!("symbol ({f}, {g}) has a zero entry"));
            }
            match out.iter().position(|s| s.0 == f && s.1 == g) {
                Some(i) => {
                    out.remove(i);
                }
                None => out.push((f, g)),
            }
        }
        out.sort();
        Ok(QtBrauerClass { symbols: out })
    }

    pub fn symbols(&self) -> &[(RationalFunction, RationalFunction)] {
        &self.symbols
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for QtBrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueValue {
    /// Forced trivial by valuation parity or the double rule.
    TriviallyOne,
    /// Explicit class in `Q*/Q*²` at a degree-one place.
    Class(SquareClassVector),
    /// The residue field is larger than `Q` and no shortcut applied.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueVerdict {
    pub place: Place,
    pub value: ResidueValue,
}

impl ResidueVerdict {
    /// `Some(true)` when trivial, `None` when undetermined.
    pub fn is_trivial(&self) -> Option<bool> {
        match &self.value {
            ResidueValue::TriviallyOne => Some(true),
            ResidueValue::Class(c) => Some(c.is_zero()),
            ResidueValue::Undetermined => None,
        }
    }
}

impl fmt::Display for ResidueValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueValue::TriviallyOne => write!(f, "trivial"),
            ResidueValue::Class(c) if c.is_zero() => write!(f, "trivial (class {{}})"),
            ResidueValue::Class(c) => write!(f, "nontrivial (class {c})"),
            ResidueValue::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// Reduction of a `v`-unit modulo `π` as a polynomial of degree < deg π.
fn reduce_unit_mod(pi: &Polynomial, u: &RationalFunction) -> Option<Rational> {
    let n = u.numerator().div_rem(pi).1;
    let d = u.denominator().div_rem(pi).1;
    (n.is_constant() && d.is_constant()).then(|| n.leading() / d.leading())
}

/// Unit part `f·π^{−v(f)}` at a finite place.
fn strip_uniformizer(pi: &Polynomial, f: &RationalFunction, v: i64) -> RationalFunction {
    let pi_rf = RationalFunction::from(pi.clone());
    f * &pi_rf.pow(-(v as i32)).expect("uniformizer nonzero")
}

/// Whether the residue of `u` (a unit at `v`) is a rational square, when that
/// can be read off without leaving `Q`.
fn residue_is_rational_square(v: &Place, f: &RationalFunction, val: i64) -> Result<bool> {
    let residue = match v {
        Place::Finite(pi) if v.rational_point().is_none() => {
            reduce_unit_mod(pi, &strip_uniformizer(pi, f, val))
        }
        _ => unit_part(v, f)?.residue,
    };
    Ok(match residue {
        Some(r) => rat_is_square(&r)?,
        None => false,
    })
}

fn is_square(f: &RationalFunction) -> Result<bool> {
    Ok(class_of(f, FieldMode::RationalConstants)?.is_zero())
}

/// The tame symbol `∂_v(f, g)`.
pub fn tame_symbol(v: &Place, f: &RationalFunction, g: &RationalFunction) -> Result<ResidueVerdict> {
    if f.is_zero() || g.is_zero() {
        return invalid("tame symbol with a zero entry");
    }
    let a = valuation(v, f)?;
    let b = valuation(v, g)?;
    let verdict = |value| ResidueVerdict {
        place: v.clone(),
        value,
    };

    if a % 2 == 0 && b % 2 == 0 {
        return Ok(verdict(ResidueValue::TriviallyOne));
    }
    if is_square(f)? || is_square(g)? {
        return Ok(verdict(ResidueValue::TriviallyOne));
    }
    // Double rule: v(f) even with square unit part (or symmetrically for g).
    if (a % 2 == 0 && residue_is_rational_square(v, f, a)?)
        || (b % 2 == 0 && residue_is_rational_square(v, g, b)?)
    {
        return Ok(verdict(ResidueValue::TriviallyOne));
    }
    if v.degree() != 1 {
        return Ok(verdict(ResidueValue::Undetermined));
    }

    let fu = unit_part(v, f)?.residue.expect("degree one place");
    let gu = unit_part(v, g)?.residue.expect("degree one place");
    let mut class = SquareClassVector::zero(FieldMode::RationalsOnly);
    if a % 2 != 0 && b % 2 != 0 {
        class = class.add(&SquareClassVector::from_basis(
            FieldMode::RationalsOnly,
            [BasisElement::MinusOne],
        )?)?;
    }
    if b % 2 != 0 {
        class = class.add(&class_of_rational(&fu)?)?;
    }
    if a % 2 != 0 {
        class = class.add(&class_of_rational(&gu)?)?;
    }
    Ok(verdict(ResidueValue::Class(class)))
}

/// Residue of a formal sum: the product of the residues of its symbols.
pub fn residue_of_class(v: &Place, c: &QtBrauerClass) -> Result<ResidueVerdict> {
    Ok(residue_with_parts(v, c)?.0)
}

fn residue_with_parts(
    v: &Place,
    c: &QtBrauerClass,
) -> Result<(ResidueVerdict, Vec<ResidueVerdict>)> {
    let parts = c
        .symbols
        .iter()
        .map(|(f, g)| tame_symbol(v, f, g))
        .collect::<Result<Vec<_>>>()?;
    let mut value = ResidueValue::TriviallyOne;
    for part in &parts {
        value = match (value, &part.value) {
            (ResidueValue::Undetermined, _) | (_, ResidueValue::Undetermined) => {
                ResidueValue::Undetermined
            }
            (acc, ResidueValue::TriviallyOne) => acc,
            (ResidueValue::TriviallyOne, ResidueValue::Class(c)) => ResidueValue::Class(c.clone()),
            (ResidueValue::Class(acc), ResidueValue::Class(c)) => ResidueValue::Class(acc.add(c)?),
        };
    }
    Ok((
        ResidueVerdict {
            place: v.clone(),
            value,
        },
        parts,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnramifiedOutcome {
    Unramified,
    Ramified,
    Unknown,
}

/// Residues at one place of the support, for the sum and for each symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceResidues {
    pub total: ResidueVerdict,
    pub per_symbol: Vec<ResidueVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedReport {
    pub class: QtBrauerClass,
    /// Places in the support of the entries; all other places are trivially unramified.
    pub places: Vec<PlaceResidues>,
    pub outcome: UnramifiedOutcome,
}

impl UnramifiedReport {
    /// `Some(true)` when unramified everywhere, `None` when some residue is undetermined.
    pub fn unramified(&self) -> Option<bool> {
        match self.outcome {
            UnramifiedOutcome::Unramified => Some(true),
            UnramifiedOutcome::Ramified => Some(false),
            UnramifiedOutcome::Unknown => None,
        }
    }

    pub fn ramified_places(&self) -> Vec<&Place> {
        self.places
            .iter()
            .filter(|p| p.total.is_trivial() == Some(false))
            .map(|p| &p.total.place)
            .collect()
    }
}

/// Checks every residue of `c` along `P¹_Q`.
pub fn check_unramified_p1(c: &QtBrauerClass) -> Result<UnramifiedReport> {
    let entries: Vec<RationalFunction> = c
        .symbols
        .iter()
        .flat_map(|(f, g)| [f.clone(), g.clone()])
        .collect();
    let places = places_of_support(&entries)?
        .iter()
        .map(|v| {
            let (total, per_symbol) = residue_with_parts(v, c)?;
            Ok(PlaceResidues { total, per_symbol })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut outcome = UnramifiedOutcome::Unramified;
    for p in &places {
        match p.total.is_trivial() {
            Some(true) => {}
            Some(false) => outcome = UnramifiedOutcome::Ramified,
            None if outcome == UnramifiedOutcome::Unramified => {
                outcome = UnramifiedOutcome::Unknown
            }
            None => {}
        }
    }
    Ok(UnramifiedReport {
        class: c.clone(),
        places,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::pencil;

    fn rf(c: &[i64]) -> RationalFunction {
        RationalFunction::from(Polynomial::from_i64s(c))
    }

    fn class(v: &ResidueVerdict) -> SquareClassVector {
        match &v.value {
            ResidueValue::Class(c) => c.clone(),
            other => panic!("expected explicit class, got {other:?}"),
        }
    }

    #[test]
    fn tame_symbol_of_t_and_t_minus_one() {
        let r = tame_symbol(&Place::at(&int(0)), &rf(&[0, 1]), &rf(&[-1, 1])).unwrap();
        assert_eq!(class(&r), class_of_rational(&int(-1)).unwrap());
        assert_eq!(r.is_trivial(), Some(false));
    }

    #[test]
    fn units_give_trivial_symbol() {
        let r = tame_symbol(&Place::at(&int(5)), &rf(&[0, 1]), &rf(&[-1, 1])).unwrap();
        assert_eq!(r.value, ResidueValue::TriviallyOne);
    }

    #[test]
    fn single_symbol_ramified_at_one() {
        let minus_p = -RationalFunction::from(pencil::p());
        let r = tame_symbol(&Place::at(&int(1)), &minus_p, &rf(&[0, 6, 6])).unwrap();
        assert_eq!(class(&r), class_of_rational(&int(3)).unwrap());
    }

    #[test]
    fn vertical_class_residues() {
        let c = pencil::vertical_class();
        let at_one = residue_of_class(&Place::at(&int(1)), &c).unwrap();
        assert_eq!(at_one.is_trivial(), Some(true));
        let at_zero = residue_of_class(&Place::at(&int(0)), &c).unwrap();
        assert_eq!(at_zero.is_trivial(), Some(true));
        let empty = QtBrauerClass::default();
        assert_eq!(
            residue_of_class(&Place::Infinity, &empty).unwrap().value,
            ResidueValue::TriviallyOne
        );
    }

    #[test]
    fn unramified_checks() {
        let report = check_unramified_p1(&pencil::vertical_class()).unwrap();
        assert_eq!(report.outcome, UnramifiedOutcome::Unramified);
        assert_eq!(report.places.len(), 6);

        let single = QtBrauerClass::new([(rf(&[0, 1]), rf(&[-1, 1]))]).unwrap();
        let report = check_unramified_p1(&single).unwrap();
        assert_eq!(report.unramified(), Some(false));
        assert_eq!(report.ramified_places(), vec![&Place::at(&int(0)), &Place::Infinity]);

        let g = rf(&[2, 0, 7]);
        let sq = QtBrauerClass::new([(rf(&[3, 1, 1]), g.pow(2).unwrap())]).unwrap();
        assert_eq!(check_unramified_p1(&sq).unwrap().unramified(), Some(true));
    }

    #[test]
    fn higher_degree_places() {
        let v = Place::finite(Polynomial::from_i64s(&[1, 0, 1])).unwrap();
        // (t^2+1, 2): v(f) = 1, [2]^1 in Q(i) is not decided here
        let r = tame_symbol(&v, &rf(&[1, 0, 1]), &rf(&[2])).unwrap();
        assert_eq!(r.value, ResidueValue::Undetermined);
        // (t^2+1, 4): 4 is a square already in Q
        let r = tame_symbol(&v, &rf(&[1, 0, 1]), &rf(&[4])).unwrap();
        assert_eq!(r.value, ResidueValue::TriviallyOne);
        // t ≡ unit mod t^2+1 but not a constant: undetermined
        let r = tame_symbol(&v, &rf(&[1, 0, 1]), &rf(&[0, 1])).unwrap();
        assert_eq!(r.value, ResidueValue::Undetermined);

        let c = QtBrauerClass::new([(rf(&[1, 0, 1]), rf(&[3]))]).unwrap();
        assert_eq!(check_unramified_p1(&c).unwrap().unramified(), None);
    }

    #[test]
    fn duplicate_symbols_cancel() {
        let s = (rf(&[0, 1]), rf(&[-1, 1]));
        let c = QtBrauerClass::new([s.clone(), s]).unwrap();
        assert!(c.is_empty());
        assert!(QtBrauerClass::new([(rf(&[0, 1]), RationalFunction::zero())]).is_err());
    }
}
