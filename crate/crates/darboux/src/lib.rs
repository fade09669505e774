//! Symbolic-numeric toolkit for Darboux integrability of rational planar systems.
//!
//! The pipeline goes: a linear ODE in `w(x)` plus a functional change of
//! variable `dw/dx = g(x,y) w(x)` produces a rational planar system together
//! with predicted invariant objects and their polynomial cofactors
//! ([`construct`]); the invariance identities are certified exactly over the
//! rationals ([`verify`]); fundamental solutions built from hypergeometric and
//! Bessel functions ([`special`]) yield first integrals whose conservation is
//! measured along numerically integrated trajectories ([`dynamics`]). The
//! [`families`] module instantiates four concrete quadratic families
//! (orthogonal-polynomial, Lotka-Volterra, a quadratic family with an
//! invariant line and an invariant parabola, and a three-parameter family
//! of centers).

pub mod algebra;
pub mod construct;
pub mod dynamics;
pub mod exprparse;
pub mod families;
pub mod special;
pub mod verify;

pub use algebra::{Poly2, RatFn, Rational};
pub use construct::{ChangeOfVar, DarbouxLogDeriv, LinearODE1, LinearODE2, PlanarSystem};
pub use verify::{InvariantCertificate, Verdict};
