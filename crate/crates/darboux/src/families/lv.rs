//! A Lotka-Volterra family with a first integral built from modified Bessel
//! functions of order ell -/+ 1/2. The product substitution u = x y,
//! v = (1 - 2 ell)/(4 y) carries the system onto a second-order equation
//! with leading coefficient u, and for integer ell >= 1 the integral has a
//! polynomial factor that is quadratic in v.

use num_traits::{One, Zero};

use crate::algebra::{rat, rat_int, Poly2, RatFn, Rational};
use crate::construct::{ChangeOfVar, LinearODE2, PlanarSystem};
use crate::special::bessel_i;

use super::{
    all_finite, birational_pullback, factorial, primitive_positive, BirationalMap, EvalError,
    FamilyError, FirstIntegralEvaluator, FundamentalPair,
};

fn guard_ell(ell: &Rational) -> Result<(), FamilyError> {
    if *ell == rat(1, 2) {
        return Err(FamilyError::GuardViolation("ell != 1/2"));
    }
    Ok(())
}

fn guard_ell_f64(ell: f64) -> Result<(), FamilyError> {
    if !ell.is_finite() || ell == 0.5 {
        return Err(FamilyError::GuardViolation("ell != 1/2"));
    }
    Ok(())
}

/// Half-odd-integer ell makes both Bessel orders integers, and I_nu = I_{-nu}
/// there, so the displayed pair spans a single solution.
fn guard_half_odd(ell: f64) -> Result<(), FamilyError> {
    let two_ell = 2.0 * ell;
    if two_ell == two_ell.round() && (two_ell as i64).rem_euclid(2) == 1 {
        return Err(FamilyError::LinearDependence(
            "at half-odd-integer ell the two Bessel solutions coincide",
        ));
    }
    Ok(())
}

/// termwise: 1 - 2 ell.
fn one_minus_two_ell(ell: &Rational) -> Rational {
    &Rational::one() - &(ell * &rat_int(2))
}

/// x' = x(1 - x/2 + y), y' = y(-(2 ell + 1)/(2 ell - 1) + x/2 - y).
pub fn lv_system(ell: &Rational) -> Result<PlanarSystem, FamilyError> {
    guard_ell(ell)?;
    let x = Poly2::var_x();
    let y = Poly2::var_y();
    let xy = &x * &y;
    let p = &(&x - &(&x * &x).scale(&rat(1, 2))) + &xy;
    let c = &(&(ell * &rat_int(2)) + &Rational::one()) / &(&(ell * &rat_int(2)) - &Rational::one());
    let q = &(&xy.scale(&rat(1, 2)) - &(&y * &y)) - &y.scale(&c);
    Ok(PlanarSystem::new(p, q))
}

/// The image of the system under u = x y, v = (1 - 2 ell)/(4 y):
/// u' = 2 u/(1 - 2 ell), v' = (1 - 2 ell)/4 + ((2 ell + 1)/(2 ell - 1)) v
/// + (2/(2 ell - 1)) u v^2.
pub fn lv_transformed_system(ell: &Rational) -> Result<PlanarSystem, FamilyError> {
    guard_ell(ell)?;
    let om = one_minus_two_ell(ell);
    let u = Poly2::var_x();
    let v = Poly2::var_y();
    let p = u.scale(&(rat_int(2) / &om));
    let two_ell_plus = &(ell * &rat_int(2)) + &Rational::one();
    let q = &(&Poly2::constant(&om / &rat_int(4)) - &v.scale(&(&two_ell_plus / &om)))
        - &(&u * &(&v * &v)).scale(&(rat_int(2) / &om));
    Ok(PlanarSystem::new(p, q))
}

/// The second-order equation behind the transformed system:
/// u w'' + ((1 + 2 ell)/2) w' - ((1 - 2 ell)^2/8) w = 0.
pub fn lv_ode(ell: &Rational) -> Result<LinearODE2, FamilyError> {
    guard_ell(ell)?;
    let om = one_minus_two_ell(ell);
    let a0 = Poly2::constant(-(&(&om * &om) / &rat_int(8)));
    let a1 = Poly2::constant(&(&(ell * &rat_int(2)) + &Rational::one()) / &rat_int(2));
    Ok(LinearODE2::new(a0, a1, Poly2::var_x()).expect("leading coefficient u is nonzero"))
}

/// The substitution w'/w = v.
pub fn lv_change_of_var() -> ChangeOfVar {
    ChangeOfVar::new(Poly2::var_y(), Poly2::one()).expect("the pair (v, 1) is admissible")
}

/// u = x y, v = (1 - 2 ell)/(4 y), with inverse x = 4 u v/(1 - 2 ell),
/// y = (1 - 2 ell)/(4 v).
pub fn lv_map(ell: &Rational) -> Result<BirationalMap, FamilyError> {
    guard_ell(ell)?;
    let om = one_minus_two_ell(ell);
    let four_v = Poly2::var_y().scale(&rat_int(4));
    let old_from_new = (
        RatFn::new(Poly2::monomial(1, 1, rat_int(4) / &om), Poly2::one()),
        RatFn::new(Poly2::constant(om.clone()), four_v.clone()),
    );
    let new_from_old = (
        RatFn::new(&Poly2::var_x() * &Poly2::var_y(), Poly2::one()),
        RatFn::new(Poly2::constant(om), four_v),
    );
    Ok(BirationalMap::new(old_from_new, new_from_old))
}

/// Coefficient of cosh in the closed form of the half-odd-order Bessel
/// function entering the numerator solution.
fn series_a(el: i64, i: i64) -> Rational {
    if i > el.div_euclid(2) {
        return Rational::zero();
    }
    &factorial(el + 2 * i) / &(&factorial(2 * i) * &factorial(el - 2 * i))
}

fn series_b(el: i64, j: i64) -> Rational {
    if j > (el - 2).div_euclid(2) {
        return Rational::zero();
    }
    &factorial(el + 2 * j) / &(&factorial(2 * j + 1) * &factorial(el - 2 * j - 2))
}

fn series_c(el: i64, i: i64) -> Rational {
    if i > (el - 1).div_euclid(2) {
        return Rational::zero();
    }
    &factorial(el + 2 * i + 1) / &(&factorial(2 * i + 1) * &factorial(el - 2 * i - 1))
}

fn series_d(el: i64, j: i64) -> Rational {
    if j > (el - 1).div_euclid(2) {
        return Rational::zero();
    }
    &factorial(el + 2 * j - 1) / &(&factorial(2 * j) * &factorial(el - 2 * j - 1))
}

fn rpow(a: &Rational, k: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= a;
    }
    acc
}

/// Polynomial factor of the first integral for integer ell >= 1, on the
/// transformed chart and pulled back to the original one. Quadratic in v;
/// the coefficients close up because the Bessel orders are half-odd there.
pub fn lv_invariant_poly(ell: u32) -> Result<(Poly2, Poly2), FamilyError> {
    if ell == 0 {
        return Err(FamilyError::GuardViolation("ell >= 1"));
    }
    let el = ell as i64;
    let om = rat_int(1 - 2 * el);
    let om2 = &om * &om;
    let t = Poly2::monomial(1, 0, &om2 / &rat_int(2));

    let mut c0 = Poly2::zero();
    for k in 0..=el {
        let mut c = &(&factorial(2 * el - k) * &factorial(2 * el - 2 * k))
            / &(&factorial(k) * &(&factorial(el - k) * &factorial(el - k)));
        c /= rpow(&rat_int(4), el - k);
        if k % 2 == 0 {
            c = -c;
        }
        c0 = &c0 + &t.pow(k as u32).scale(&c);
    }
    let c0 = c0.scale(&(&rat_int(2) * &(&om2 * &om2)));

    let mut c1 = Poly2::zero();
    for m in 0..el {
        let mut inner = Rational::zero();
        for i in 0..=m {
            let j = m - i;
            inner +=
                &(&series_a(el, i) * &series_b(el, j)) - &(&series_c(el, i) * &series_d(el, j));
        }
        let c = &inner / &rpow(&rat_int(2), 2 * m + 1);
        c1 = &c1 + &t.pow((el - m) as u32).scale(&c);
    }
    let sign = if el % 2 == 0 { rat_int(-16) } else { rat_int(16) };
    let c1 = c1.scale(&(&sign * &om2));

    let mut c2 = Poly2::zero();
    for k in 0..el {
        let mut c = &(&factorial(2 * el - 2 - k) * &factorial(2 * el - 2 - 2 * k))
            / &(&factorial(k) * &(&factorial(el - 1 - k) * &factorial(el - 1 - k)));
        c /= rpow(&rat_int(4), el - 1 - k);
        if k % 2 == 0 {
            c = -c;
        }
        c2 = &c2 + &t.pow(k as u32 + 2).scale(&c);
    }
    let c2 = c2.scale(&rat_int(32));

    let v = Poly2::var_y();
    let raw = &(&c0 + &(&c1 * &v)) + &(&c2 * &(&v * &v));
    let f_uv = primitive_positive(&raw);
    let f_xy = birational_pullback(&lv_map(&rat_int(el))?, &f_uv)?;
    Ok((f_uv, f_xy))
}

/// Fundamental pair w_i(u) = u^a I_{nu_i}(ztilde), a = (1 - 2 ell)/4,
/// ztilde = |1 - 2 ell| sqrt(u/2), nu_1 = ell - 1/2, nu_2 = 1/2 - ell.
pub fn lv_fundamental_pair(ell: f64) -> Result<FundamentalPair, FamilyError> {
    guard_ell_f64(ell)?;
    guard_half_odd(ell)?;
    let a = (1.0 - 2.0 * ell) / 4.0;
    let scale = (1.0 - 2.0 * ell).abs();
    Ok(FundamentalPair::new(
        format!("Bessel pair, ell = {ell}"),
        move |u: f64| {
            if !(u > 0.0) {
                return None;
            }
            let z = scale * (u / 2.0).sqrt();
            let ua = u.powf(a);
            let ua1 = u.powf(a - 1.0);
            let mut out = [0.0; 4];
            for (slot, nu) in [(0usize, ell - 0.5), (2usize, 0.5 - ell)] {
                let i0 = bessel_i(nu, z).ok()?.value;
                let below = bessel_i(nu - 1.0, z).ok()?.value;
                let above = bessel_i(nu + 1.0, z).ok()?.value;
                out[slot] = ua * i0;
                out[slot + 1] = ua1 * (a * i0 + z * (below + above) / 4.0);
            }
            let vals = (out[0], out[1], out[2], out[3]);
            all_finite(vals).then_some(vals)
        },
    ))
}

/// Closed-form first integral on x > 0, y > 0: a ratio of the combinations
/// sqrt(2y) I_{+-(ell + 1/2)} - sgn(1 - 2 ell) sqrt(x) I_{+-(ell - 1/2)}
/// at ztilde = |1 - 2 ell| sqrt(x y/2).
pub fn lv_display_evaluator(ell: f64) -> Result<FirstIntegralEvaluator, FamilyError> {
    guard_ell_f64(ell)?;
    guard_half_odd(ell)?;
    let sigma = if 1.0 - 2.0 * ell > 0.0 { 1.0 } else { -1.0 };
    let scale = (1.0 - 2.0 * ell).abs();
    Ok(FirstIntegralEvaluator::new(
        format!("Bessel first integral, ell = {ell}"),
        move |x: f64, y: f64| {
            if !(x > 0.0 && y > 0.0) {
                return Err(EvalError::DomainError("the closed form needs x > 0 and y > 0"));
            }
            let z = scale * (x * y / 2.0).sqrt();
            let sy = (2.0 * y).sqrt();
            let sx = x.sqrt();
            let num =
                sy * bessel_i(ell + 0.5, z)?.value - sigma * sx * bessel_i(ell - 0.5, z)?.value;
            let den =
                sy * bessel_i(-ell - 0.5, z)?.value - sigma * sx * bessel_i(0.5 - ell, z)?.value;
            if den == 0.0 {
                return Err(EvalError::DivByZero);
            }
            let h = num / den;
            if h.is_finite() {
                Ok(h)
            } else {
                Err(EvalError::DomainError("solution ratio overflowed"))
            }
        },
    ))
}

/// Evaluate the closed-form first integral at one point.
pub fn lv_h_eval(ell: f64, x: f64, y: f64) -> Result<f64, FamilyError> {
    let h = lv_display_evaluator(ell)?;
    Ok(h.eval(x, y)?)
}

/// The same integral computed through the fundamental pair on the
/// transformed chart.
pub fn lv_pair_evaluator(ell: f64) -> Result<FirstIntegralEvaluator, FamilyError> {
    let pair = lv_fundamental_pair(ell)?;
    let c = (1.0 - 2.0 * ell) / 4.0;
    let label = format!("invariant ratio over the {}", pair.label());
    Ok(FirstIntegralEvaluator::from_pair(
        label,
        pair,
        move |x, y| (x * y, c / y),
        |_, v| (v, 1.0),
    ))
}
