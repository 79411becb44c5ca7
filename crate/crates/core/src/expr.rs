//! Polynomial expressions in `t` for command-line input.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | factor
//! factor   := atom ('^' nat)?
//! atom     := rational | 't' | '(' expr ')'
//! rational := int ('/' posint)?     -- no whitespace inside a literal
//! ```
//!
//! `1/2` is a single literal while `1 / 2` and `(1)/2` are divisions; both
//! evaluate to the same value.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{fmt_rational, Rational, RationalFunction};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    /// A nonnegative rational literal.
    Num(Rational),
    Var,
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Div(Box<PolyExpr>, Box<PolyExpr>),
    Neg(Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| (start, std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")))
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = PolyExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<PolyExpr> {
        if self.eat(b'-') {
            return Ok(PolyExpr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<PolyExpr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let Some((at, text)) = self.digits() else {
            return err(self.pos, "expected a nonnegative integer exponent");
        };
        match text.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(PolyExpr::Pow(Box::new(base), e)),
            _ => err(at, format!("exponent {text} exceeds {MAX_EXPONENT}")),
        }
    }

    fn atom(&mut self) -> Result<PolyExpr> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(PolyExpr::Var)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return err(self.pos, "expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) => err(self.pos, format!("unexpected character {:?}", c as char)),
            None => err(self.pos, "unexpected end of input"),
        }
    }

    fn rational(&mut self) -> Result<PolyExpr> {
        let (_, n) = self.digits().expect("caller saw a digit");
        let n: BigInt = n.parse().expect("digits");
        let slash = self.pos;
        let literal_denominator =
            self.src.get(slash) == Some(&b'/') && self.src.get(slash + 1).is_some_and(u8::is_ascii_digit);
        if !literal_denominator {
            return Ok(PolyExpr::Num(Rational::from_integer(n)));
        }
        self.pos += 1;
        let (at, d) = self.digits().expect("checked digit");
        let d: BigInt = d.parse().expect("digits");
        if d.is_zero() {
            return err(at, "zero denominator");
        }
        Ok(PolyExpr::Num(Rational::new(n, d)))
    }
}

/// Parses an expression in `t`.
pub fn parse_poly(src: &str) -> Result<PolyExpr> {
    if !src.is_ascii() {
        let pos = src.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return err(pos, "non-ASCII input");
    }
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

/// Parses and evaluates in one step.
pub fn parse_function(src: &str) -> Result<RationalFunction> {
    parse_poly(src)?.eval()
}

impl PolyExpr {
    pub fn eval(&self) -> Result<RationalFunction> {
        Ok(match self {
            PolyExpr::Num(c) => RationalFunction::constant(c.clone()),
            PolyExpr::Var => RationalFunction::t(),
            PolyExpr::Add(a, b) => a.eval()? + b.eval()?,
            PolyExpr::Sub(a, b) => a.eval()? - b.eval()?,
            PolyExpr::Mul(a, b) => a.eval()? * b.eval()?,
            PolyExpr::Div(a, b) => {
                let d = b.eval()?;
                if d.is_zero() {
                    return Err(Error::InvalidArgument(format!("division by zero in {self}")));
                }
                a.eval()? / d
            }
            PolyExpr::Neg(a) => -a.eval()?,
            PolyExpr::Pow(a, e) => {
                let base = a.eval()?;
                let mut acc = RationalFunction::one();
                for _ in 0..*e {
                    acc = &acc * &base;
                }
                acc
            }
        })
    }

    fn prec(&self) -> u8 {
        match self {
            PolyExpr::Add(..) | PolyExpr::Sub(..) => 1,
            PolyExpr::Mul(..) | PolyExpr::Div(..) => 2,
            PolyExpr::Neg(..) => 3,
            PolyExpr::Pow(..) => 4,
            PolyExpr::Num(_) | PolyExpr::Var => 5,
        }
    }

    fn write_at(&self, out: &mut String, min_prec: u8) {
        let wrap = self.prec() < min_prec;
        if wrap {
            out.push('(');
        }
        match self {
            PolyExpr::Num(c) => out.push_str(&fmt_rational(c)),
            PolyExpr::Var => out.push('t'),
            PolyExpr::Add(a, b) => binary(out, a, "+", b, 1, 2),
            PolyExpr::Sub(a, b) => binary(out, a, "-", b, 1, 2),
            PolyExpr::Mul(a, b) => binary(out, a, "*", b, 2, 3),
            PolyExpr::Div(a, b) => {
                a.write_at(out, 2);
                out.push('/');
                let mut rhs = String::new();
                b.write_at(&mut rhs, 3);
                // a leading digit would fuse with the slash into a literal
                if rhs.starts_with(|c: char| c.is_ascii_digit()) {
                    out.push('(');
                    out.push_str(&rhs);
                    out.push(')');
                } else {
                    out.push_str(&rhs);
                }
            }
            PolyExpr::Neg(a) => {
                out.push('-');
                a.write_at(out, 3);
            }
            PolyExpr::Pow(a, e) => {
                let fractional = matches!(&**a, PolyExpr::Num(c) if !c.is_integer());
                if fractional {
                    out.push('(');
                    a.write_at(out, 0);
                    out.push(')');
                } else {
                    a.write_at(out, 5);
                }
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        if wrap {
            out.push(')');
        }
    }
}

fn binary(out: &mut String, a: &PolyExpr, op: &str, b: &PolyExpr, lp: u8, rp: u8) {
    a.write_at(out, lp);
    out.push_str(op);
    b.write_at(out, rp);
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_at(&mut s, 0);
        f.write_str(&s)
    }
}

/// Splits `"(a, b) + (c, d)"` into `[("a", "b"), ("c", "d")]`.
///
/// Entries are returned trimmed and unparsed; commas and `+` inside nested
/// parentheses belong to the entries.
pub fn split_symbol_list(src: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if bytes.get(i) != Some(&b'(') {
            return err(i, "expected '(' opening a symbol");
        }
        let open = i;
        let mut depth = 0usize;
        let mut comma = None;
        let mut close = None;
        for (j, &c) in bytes.iter().enumerate().skip(open) {
            match c {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(j);
                        break;
                    }
                }
                b',' if depth == 1 => {
                    if comma.is_some() {
                        return err(j, "symbol has more than two entries");
                    }
                    comma = Some(j);
                }
                _ => {}
            }
        }
        let Some(close) = close else {
            return err(open, "unbalanced parentheses");
        };
        let Some(comma) = comma else {
            return err(open, "symbol needs two entries separated by ','");
        };
        out.push((
            src[open + 1..comma].trim().to_string(),
            src[comma + 1..close].trim().to_string(),
        ));
        i = close + 1;
        skip_ws(&mut i);
        if i == bytes.len() {
            return Ok(out);
        }
        if bytes[i] != b'+' {
            return err(i, "expected '+' between symbols");
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};
    use crate::pencil;
    use proptest::prelude::*;

    #[test]
    fn parses_p() {
        let e = parse_poly("3*(t-1)^3*(t+3)").unwrap();
        assert_eq!(e.eval().unwrap(), pencil::p().into());
        assert_eq!(parse_poly("t").unwrap(), PolyExpr::Var);
        assert_eq!(parse_function("6*t*(t+1)").unwrap(), pencil::f_arg());
    }

    #[test]
    fn literals_and_division() {
        assert_eq!(parse_poly("1/2").unwrap(), PolyExpr::Num(rat(1, 2)));
        let spaced = parse_poly("1 / 2").unwrap();
        assert!(matches!(spaced, PolyExpr::Div(..)));
        assert_eq!(spaced.eval().unwrap(), RationalFunction::constant(rat(1, 2)));
        assert_eq!(parse_function("t/(t-1) - 1").unwrap(), parse_function("1/(t-1)").unwrap());
        assert_eq!(parse_function("-(t^2)").unwrap().eval(&int(3)), Some(int(-9)));
    }

    #[test]
    fn errors_carry_positions() {
        let pos = |s: &str| match parse_poly(s) {
            Err(Error::Parse { pos, .. }) => pos,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(pos("t+"), 2);
        assert_eq!(pos("(t"), 2);
        assert_eq!(pos("t x"), 2);
        assert_eq!(pos("t^99999999999"), 2);
        assert_eq!(pos("1/0"), 2);
        assert_eq!(pos("t^-1"), 2);
        assert!(parse_function("1/(t-t)").is_err());
    }

    #[test]
    fn printing() {
        let cases = [
            ("3*(t-1)^3*(t+3)", "3*(t-1)^3*(t+3)"),
            ("t - (t - 1)", "t-(t-1)"),
            ("-(t*t)", "-(t*t)"),
            ("(1)/2", "1/(2)"),
            ("(1/2)^3", "(1/2)^3"),
            ("t*3/2", "t*3/2"),
            ("(t*3)/2", "t*3/(2)"),
            ("-t^2", "-t^2"),
        ];
        for (src, printed) in cases {
            let e = parse_poly(src).unwrap();
            assert_eq!(e.to_string(), printed, "{src}");
            assert_eq!(parse_poly(printed).unwrap(), e, "{src}");
        }
    }

    #[test]
    fn symbol_lists() {
        let s = split_symbol_list(" (-3*(t-1)^3*(t+3), 6*t*(t+1)) + (x-q, (t-1)) ").unwrap();
        assert_eq!(
            s,
            vec![
                ("-3*(t-1)^3*(t+3)".to_string(), "6*t*(t+1)".to_string()),
                ("x-q".to_string(), "(t-1)".to_string()),
            ]
        );
        assert!(split_symbol_list("(t)").is_err());
        assert!(split_symbol_list("(t, 1) (t, 2)").is_err());
        assert!(split_symbol_list("(t, 1, 2)").is_err());
        assert!(split_symbol_list("(t, (1)").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = PolyExpr> {
        let leaf = prop_oneof![
            Just(PolyExpr::Var),
            (0i64..20, 1i64..6).prop_map(|(n, d)| PolyExpr::Num(rat(n, d))),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Div(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| PolyExpr::Neg(Box::new(a))),
                (inner, 0u32..4).prop_map(|(a, e)| PolyExpr::Pow(Box::new(a), e)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse_poly(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e, "printed as {}", printed);
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
