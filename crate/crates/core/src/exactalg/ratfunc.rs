//! Elements of `Q(t)` in canonical reduced form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{poly_gcd, Polynomial};
use super::rational::Rational;
use crate::error::{invalid, Result};

/// A rational function `numerator / denominator` with a monic denominator
/// coprime to the numerator. The zero function has denominator `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return invalid("rational function with zero denominator");
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den)?;
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading().recip();
        num = num.scale(&lc);
        den = den.scale(&lc);
        Ok(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from(Polynomial::one())
    }

    pub fn t() -> Self {
        Self::from(Polynomial::t())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from(Polynomial::constant(c))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return invalid("inverse of the zero function");
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// `f(c·t)`.
    pub fn scale_var(&self, c: &Rational) -> Result<Self> {
        Self::new(self.num.scale_var(c), self.den.scale_var(c))
    }

    /// `f(−t)`.
    pub fn negate_var(&self) -> Self {
        self.scale_var(&-Rational::one())
            .expect("t -> -t is invertible")
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Ord for RationalFunction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

impl PartialOrd for RationalFunction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .expect("nonzero denominator")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominator")
    }
}

/// Panics on division by the zero function; use [`RationalFunction::inv`] for a checked form.
impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.inv().expect("division by the zero function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c)
    }

    #[test]
    fn canonical_form() {
        // (2t - 2) / (4t^2 - 4) = (1/2) / (t + 1)
        let f = RationalFunction::new(poly(&[-2, 2]), poly(&[-4, 0, 4])).unwrap();
        assert_eq!(f.numerator(), &Polynomial::constant(rat(1, 2)));
        assert_eq!(f.denominator(), &poly(&[1, 1]));
        let g = RationalFunction::new(poly(&[1]), poly(&[2, 2])).unwrap();
        assert_eq!(f, g);
        assert!(RationalFunction::new(poly(&[1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn field_operations() {
        let t = RationalFunction::t();
        let one = RationalFunction::one();
        let f = &t / &(&t + &one);
        let g = &one / &(&t + &one);
        assert_eq!(&f + &g, one);
        assert_eq!((&f * &f.inv().unwrap()), one);
        assert_eq!(f.pow(-2).unwrap(), (&f * &f).inv().unwrap());
        assert_eq!(f.eval(&int(1)), Some(rat(1, 2)));
        assert_eq!(f.eval(&int(-1)), None);
        assert!(RationalFunction::zero().inv().is_err());
    }

    #[test]
    fn display() {
        let t = RationalFunction::t();
        let f = &t / &(&t - &RationalFunction::one());
        assert_eq!(f.to_string(), "(t)/(t-1)");
        assert_eq!(t.to_string(), "t");
    }

    #[test]
    fn negate_variable() {
        let f = RationalFunction::from(poly(&[1, 2, 3]));
        assert_eq!(f.negate_var(), RationalFunction::from(poly(&[1, -2, 3])));
    }
}
