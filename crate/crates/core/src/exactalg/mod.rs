//! Exact arithmetic over `Q`, `Q[t]` and `Q(t)`.

pub mod factor;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use factor::{poly_factor, squarefree_decomposition, Factorization};
pub use poly::{poly_gcd, Polynomial};
pub use ratfunc::RationalFunction;
pub use rational::{
    fmt_rational, int, int_factor, parse_rational, rat, rat_is_square, IntFactorization, Rational,
};
