//! Closed points of the projective line over `Q` and the discrete valuations
//! they define on `Q(t)`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactalg::{poly_factor, Polynomial, Rational, RationalFunction};

/// A closed point of `P¹_Q`: a monic irreducible polynomial, or infinity.
///
/// Places are ordered with finite places first (by degree, then coefficients)
/// and infinity last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Polynomial),
    Infinity,
}

impl Place {
    /// The finite place carried by a monic irreducible polynomial.
    ///
    /// Irreducibility is checked by factoring.
    pub fn finite(pi: Polynomial) -> Result<Place> {
        if !pi.is_monic() || pi.degree() == Some(0) {
            return invalid(format!("{pi} is not a monic nonconstant polynomial"));
        }
        let fac = poly_factor(&pi)?;
        if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
            return invalid(format!("{pi} is not irreducible over Q"));
        }
        Ok(Place::Finite(pi))
    }

    /// The place `t = a`.
    pub fn at(a: &Rational) -> Place {
        Place::Finite(Polynomial::linear(a))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().expect("nonconstant"),
            Place::Infinity => 1,
        }
    }

    /// The rational point under a degree-one place; `None` for infinity and
    /// for places of higher degree.
    pub fn rational_point(&self) -> Option<Rational> {
        match self {
            Place::Finite(pi) if pi.degree() == Some(1) => Some(-pi.coeff(0)),
            _ => None,
        }
    }

    /// The place `t ↦ −t` maps this one to.
    pub fn negate(&self) -> Place {
        match self {
            Place::Infinity => Place::Infinity,
            Place::Finite(pi) => Place::Finite(pi.scale_var(&-Rational::one()).monic()),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "{pi}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

/// `(v(f), [f̃])`: the valuation and the residue of the unit part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitPart {
    pub valuation: i64,
    /// Present only at places with residue field `Q`.
    pub residue: Option<Rational>,
}

fn poly_multiplicity(f: &Polynomial, pi: &Polynomial) -> (i64, Polynomial) {
    let mut g = f.clone();
    let mut k = 0;
    while let Some(q) = g.exact_div(pi) {
        g = q;
        k += 1;
    }
    (k, g)
}

/// Order of vanishing of a nonzero `f` at `v`.
pub fn valuation(v: &Place, f: &RationalFunction) -> Result<i64> {
    if f.is_zero() {
        return invalid("valuation of zero");
    }
    Ok(match v {
        Place::Finite(pi) => {
            poly_multiplicity(f.numerator(), pi).0 - poly_multiplicity(f.denominator(), pi).0
        }
        Place::Infinity => degree_i64(f.denominator()) - degree_i64(f.numerator()),
    })
}

fn degree_i64(p: &Polynomial) -> i64 {
    p.degree().expect("nonzero") as i64
}

/// Valuation together with the class of `f·π^{−v(f)}` at the point.
///
/// The uniformizer is `π` at finite places and `1/t` at infinity. Residues
/// are only produced at degree-one places (including infinity); requesting
/// one elsewhere is an error.
pub fn unit_part(v: &Place, f: &RationalFunction) -> Result<UnitPart> {
    if f.is_zero() {
        return invalid("unit part of zero");
    }
    match v {
        Place::Infinity => Ok(UnitPart {
            valuation: valuation(v, f)?,
            // den is monic, so the leading-coefficient ratio is lc(num)
            residue: Some(f.numerator().leading() / f.denominator().leading()),
        }),
        Place::Finite(pi) => {
            let Some(a) = v.rational_point() else {
                return Err(Error::UnsupportedResidueField(pi.to_string()));
            };
            let (vn, n) = poly_multiplicity(f.numerator(), pi);
            let (vd, d) = poly_multiplicity(f.denominator(), pi);
            let residue = n.eval(&a) / d.eval(&a);
            debug_assert!(!residue.is_zero());
            Ok(UnitPart {
                valuation: vn - vd,
                residue: Some(residue),
            })
        }
    }
}

/// Every place at which some `f` has a zero or a pole, in canonical order.
pub fn places_of_support(fs: &[RationalFunction]) -> Result<Vec<Place>> {
    let mut out = BTreeSet::new();
    for f in fs {
        if f.is_zero() {
            return invalid("support of zero");
        }
        for part in [f.numerator(), f.denominator()] {
            for (pi, _) in poly_factor(part)?.factors {
                out.insert(Place::Finite(pi));
            }
        }
        if valuation(&Place::Infinity, f)? != 0 {
            out.insert(Place::Infinity);
        }
    }
    Ok(out.into_iter().collect())
}
