//! A quadratic family of centers x' = y (1 + a x), y' = -x + d x^2 - b y^2.
//! A first-order equation in x with the substitution w'/w = y^2 rebuilds
//! the system up to the time factor 1 + a x, a conic with cofactor -2 b y
//! certifies integrability together with the exponential factor carried by
//! the line 1 + a x = 0, and (1 + a x)^{2b/a} times the conic is a first
//! integral wherever 1 + a x > 0.

use num_traits::{One, Zero};

use crate::algebra::{rat_int, rat_to_f64, Poly2, RatFn, Rational};
use crate::construct::{ChangeOfVar, DarbouxLogDeriv, LinearODE1, PlanarSystem};

use super::{EvalError, FamilyError, FirstIntegralEvaluator};

fn guard_params(a: &Rational, b: &Rational, d: &Rational) -> Result<(), FamilyError> {
    if a.is_zero() {
        return Err(FamilyError::GuardViolation("a != 0"));
    }
    if b.is_zero() {
        return Err(FamilyError::GuardViolation("b != 0"));
    }
    if (a + b).is_zero() {
        return Err(FamilyError::GuardViolation("a + b != 0"));
    }
    if (&(b * &rat_int(2)) + a).is_zero() {
        return Err(FamilyError::GuardViolation("a + 2b != 0"));
    }
    if (&(a + b) + d).is_zero() {
        return Err(FamilyError::GuardViolation("a + b + d != 0"));
    }
    Ok(())
}

/// x' = y (1 + a x), y' = -x + d x^2 - b y^2.
pub fn center_system(
    a: &Rational,
    b: &Rational,
    d: &Rational,
) -> Result<PlanarSystem, FamilyError> {
    guard_params(a, b, d)?;
    let p = &Poly2::var_y() + &Poly2::monomial(1, 1, a.clone());
    let q = &(&Poly2::monomial(2, 0, d.clone()) - &Poly2::var_x())
        - &Poly2::monomial(0, 2, b.clone());
    Ok(PlanarSystem::new(p, q))
}

/// The first-order data behind the system: (1 + a x) w' + 2 b w = 0 composed
/// with h = (2 d x^2 - 2 x)/(1 + a x).
pub fn center_ode(a: &Rational, b: &Rational, d: &Rational) -> Result<LinearODE1, FamilyError> {
    guard_params(a, b, d)?;
    let one_ax = &Poly2::one() + &Poly2::monomial(1, 0, a.clone());
    let a0 = Poly2::constant(b * &rat_int(2));
    let h0 = &Poly2::monomial(2, 0, d * &rat_int(2)) - &Poly2::var_x().scale(&rat_int(2));
    Ok(LinearODE1::new(a0, one_ax.clone(), h0, one_ax).expect("A1 = 1 + a x is nonzero"))
}

/// The substitution w'/w = y^2.
pub fn center_change_of_var() -> ChangeOfVar {
    ChangeOfVar::new(Poly2::monomial(0, 2, Rational::one()), Poly2::one())
        .expect("the pair (y^2, 1) is admissible")
}

/// The conic invariant
/// b (a + 2b) d x^2 - b (a + b)(a + 2b) y^2 - 2 b (a + b + d) x + (a + b + d),
/// its cofactor -2 b y, and the first integral (1 + a x)^{2b/a} f on the
/// half-plane 1 + a x > 0.
pub fn center_conic_and_h(
    a: &Rational,
    b: &Rational,
    d: &Rational,
) -> Result<(Poly2, Poly2, FirstIntegralEvaluator), FamilyError> {
    guard_params(a, b, d)?;
    let apb = a + b;
    let ap2b = &(b * &rat_int(2)) + a;
    let abd = &apb + d;
    let f = &(&(&Poly2::monomial(2, 0, &(b * &ap2b) * d)
        - &Poly2::monomial(0, 2, &(b * &apb) * &ap2b))
        - &Poly2::var_x().scale(&(&(b * &abd) * &rat_int(2))))
        + &Poly2::constant(abd);
    let k = Poly2::monomial(0, 1, -(b * &rat_int(2)));
    let (af, bf) = (rat_to_f64(a), rat_to_f64(b));
    let expo = 2.0 * bf / af;
    let conic = f.clone();
    let h = FirstIntegralEvaluator::new(
        format!("conic-and-power first integral, a = {a}, b = {b}, d = {d}"),
        move |x: f64, y: f64| {
            let base = 1.0 + af * x;
            if base <= 0.0 {
                return Err(EvalError::DomainError("the first integral needs 1 + a x > 0"));
            }
            let val = base.powf(expo) * conic.eval_f64(x, y);
            if val.is_finite() {
                Ok(val)
            } else {
                Err(EvalError::DomainError("solution ratio overflowed"))
            }
        },
    );
    Ok((f, k, h))
}

/// Log-derivative of the exponential factor carried by the invariant line
/// 1 + a x = 0, normalized so its cofactor is y.
pub fn center_line_object(a: &Rational) -> (DarbouxLogDeriv, Poly2) {
    let one_ax = &Poly2::one() + &Poly2::monomial(1, 0, a.clone());
    let object = DarbouxLogDeriv {
        lx: RatFn::new(Poly2::one(), one_ax),
        ly: RatFn::zero(),
    };
    (object, Poly2::var_y())
}
