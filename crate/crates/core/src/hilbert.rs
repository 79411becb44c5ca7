//! Local Hilbert symbols over `Q`.
//!
//! For `a = p^α u`, `b = p^β v` with `u`, `v` units:
//!
//! - odd `p`: `(a, b)_p = (−1)^{αβ(p−1)/2} (u|p)^β (v|p)^α`
//! - `p = 2`: `(a, b)_2 = (−1)^{ε(u)ε(v) + αω(v) + βω(u)}` with
//!   `ε(u) = (u−1)/2`, `ω(u) = (u²−1)/8` taken mod 2
//! - real place: `−1` iff both arguments are negative.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactalg::rational::split_prime_power;
use crate::exactalg::{int_factor, Rational};

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RationalPlace {
    Real,
    Prime(u64),
}

impl RationalPlace {
    /// Checked constructor for a finite place.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        Ok(RationalPlace::Prime(p))
    }
}

impl fmt::Display for RationalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPlace::Real => write!(f, "real"),
            RationalPlace::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for RationalPlace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "real" | "inf" | "infinity") {
            return Ok(RationalPlace::Real);
        }
        let p: u64 = s.parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("expected `real` or a prime, got {s:?}"),
        })?;
        RationalPlace::prime(p)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2u64..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// A value in `{±1}`, read additively as a local invariant in `{0, 1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolValue {
    Plus,
    Minus,
}

impl SymbolValue {
    pub fn from_sign(s: i8) -> Self {
        if s < 0 {
            SymbolValue::Minus
        } else {
            SymbolValue::Plus
        }
    }

    fn from_parity(odd: bool) -> Self {
        if odd {
            SymbolValue::Minus
        } else {
            SymbolValue::Plus
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            SymbolValue::Plus => 1,
            SymbolValue::Minus => -1,
        }
    }

    pub fn is_trivial(self) -> bool {
        self == SymbolValue::Plus
    }

    /// `"0"` or `"1/2"`.
    pub fn invariant(self) -> &'static str {
        match self {
            SymbolValue::Plus => "0",
            SymbolValue::Minus => "1/2",
        }
    }
}

/// Multiplication of signs, i.e. addition of invariants in `Z/2`.
impl Add for SymbolValue {
    type Output = SymbolValue;
    fn add(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_parity(self != rhs)
    }
}

impl std::iter::Sum for SymbolValue {
    fn sum<I: Iterator<Item = SymbolValue>>(iter: I) -> SymbolValue {
        iter.fold(SymbolValue::Plus, Add::add)
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign())
    }
}

/// Integer in the same square class: `n/d ~ n·d`.
fn integral_rep(a: &Rational) -> BigInt {
    a.numer() * a.denom()
}

fn legendre_unchecked(a: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb);
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a | p)` for an odd prime `p` not dividing `a`.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return invalid(format!("{p} is not an odd prime"));
    }
    if (a % BigInt::from(p)).is_zero() {
        return invalid(format!("{p} divides {a}"));
    }
    Ok(legendre_unchecked(a, p))
}

fn mod8(u: &BigInt) -> u8 {
    u.mod_floor(&BigInt::from(8)).to_u8().expect("residue mod 8")
}

fn epsilon(u: &BigInt) -> bool {
    mod8(u) % 4 == 3
}

fn omega(u: &BigInt) -> bool {
    matches!(mod8(u), 3 | 5)
}

/// The Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &Rational, b: &Rational, v: RationalPlace) -> Result<SymbolValue> {
    if a.is_zero() || b.is_zero() {
        return invalid("Hilbert symbol of zero");
    }
    let (a, b) = (integral_rep(a), integral_rep(b));
    Ok(match v {
        RationalPlace::Real => SymbolValue::from_parity(a.is_negative() && b.is_negative()),
        RationalPlace::Prime(2) => {
            let two = BigInt::from(2);
            let (alpha, u) = split_prime_power(&a, &two);
            let (beta, w) = split_prime_power(&b, &two);
            let e = (epsilon(&u) && epsilon(&w))
                ^ (alpha % 2 == 1 && omega(&w))
                ^ (beta % 2 == 1 && omega(&u));
            SymbolValue::from_parity(e)
        }
        RationalPlace::Prime(p) => {
            let pb = BigInt::from(p);
            let (alpha, u) = split_prime_power(&a, &pb);
            let (beta, w) = split_prime_power(&b, &pb);
            let mut sign = 1i8;
            if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
                sign = -sign;
            }
            if beta % 2 == 1 {
                sign *= legendre_unchecked(&u, p);
            }
            if alpha % 2 == 1 {
                sign *= legendre_unchecked(&w, p);
            }
            SymbolValue::from_sign(sign)
        }
    })
}

/// Whether `a` is a square in the completion `Q_v`.
pub fn qp_is_square(a: &Rational, v: RationalPlace) -> Result<bool> {
    if a.is_zero() {
        return invalid("squareness of zero");
    }
    let n = integral_rep(a);
    Ok(match v {
        RationalPlace::Real => n.is_positive(),
        RationalPlace::Prime(p) => {
            let (val, u) = split_prime_power(&n, &BigInt::from(p));
            val % 2 == 0
                && if p == 2 {
                    mod8(&u) == 1
                } else {
                    legendre_unchecked(&u, p) == 1
                }
        }
    })
}

/// The local symbols of a pair at every place where they can be nontrivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFormulaReport {
    pub values: Vec<(RationalPlace, SymbolValue)>,
    pub product: SymbolValue,
}

impl ProductFormulaReport {
    pub fn holds(&self) -> bool {
        self.product.is_trivial()
    }
}

/// The places where `(a, b)_v` may be nontrivial: real, 2, and the odd primes
/// dividing a numerator or denominator.
pub fn relevant_places(a: &Rational, b: &Rational) -> Result<Vec<RationalPlace>> {
    let mut places = vec![RationalPlace::Real, RationalPlace::Prime(2)];
    let mut primes = std::collections::BTreeSet::new();
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        for (p, _) in int_factor(n)?.factors {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::Unsupported(format!("prime {p} exceeds 64 bits")))?;
            if p != 2 {
                primes.insert(p);
            }
        }
    }
    places.extend(primes.into_iter().map(RationalPlace::Prime));
    Ok(places)
}

/// Evaluates `(a, b)_v` at every relevant place and multiplies the results.
pub fn product_formula_check(a: &Rational, b: &Rational) -> Result<ProductFormulaReport> {
    let values = relevant_places(a, b)?
        .into_iter()
        .map(|v| Ok((v, hilbert_symbol(a, b, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let product = values.iter().map(|(_, s)| *s).sum();
    Ok(ProductFormulaReport { values, product })
}
