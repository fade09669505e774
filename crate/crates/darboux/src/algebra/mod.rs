//! Exact arithmetic: rationals, sparse bivariate polynomials, rational functions.

pub mod linsolve;
mod poly;
mod ratfn;
mod rational;

pub(crate) use poly::{univariate_gcd, univariate_sqrt_real};
pub use poly::{Monomial, Poly2, Var};
pub use ratfn::RatFn;
pub(crate) use rational::rational_gcd;
pub use rational::{rat, rat_from_str, rat_int, rat_to_f64, Rational};
