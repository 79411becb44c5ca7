//! Rational numbers and integer factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

/// Exact rational number. Always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `n` or `n/d`, the same surface syntax the expression parser accepts.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `-n`, `n/d` or `-n/d`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        pos: 0,
        msg: format!("not a rational number: {s:?}"),
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if !d.is_positive() || d.to_string().starts_with('+') {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `max(|numerator|, denominator)`.
pub fn height(r: &Rational) -> BigInt {
    r.numer().abs().max(r.denom().clone())
}

/// Signed prime factorization of a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    pub sign: i8,
    /// Primes in increasing order with positive exponents.
    pub factors: Vec<(BigInt, u32)>,
}

impl IntFactorization {
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }
}

/// Trial-division factorization. Intended for the moderately sized integers
/// that appear as constants of the functions handled here.
pub fn int_factor(n: &BigInt) -> Result<IntFactorization> {
    if n.is_zero() {
        return invalid("cannot factor zero");
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut factors = Vec::new();
    let mut push = |p: &BigInt, m: &mut BigInt| {
        let mut e = 0u32;
        while (&*m % p).is_zero() {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
    };
    push(&BigInt::from(2), &mut m);
    push(&BigInt::from(3), &mut m);
    // 6k ± 1 wheel
    let mut k = BigInt::from(5);
    let two = BigInt::from(2);
    let four = BigInt::from(4);
    while &k * &k <= m {
        push(&k, &mut m);
        let k2 = &k + &two;
        push(&k2, &mut m);
        k += &two + &four;
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    Ok(IntFactorization { sign, factors })
}

fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Whether `a` is a square in `Q`.
pub fn rat_is_square(a: &Rational) -> Result<bool> {
    if a.is_zero() {
        return invalid("squareness of zero is not defined");
    }
    Ok(a.is_positive() && is_square_int(a.numer()) && is_square_int(a.denom()))
}

/// Exponent of the prime `p` in the integer `n` (nonzero), and the cofactor.
pub fn split_prime_power(n: &BigInt, p: &BigInt) -> (u64, BigInt) {
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}
