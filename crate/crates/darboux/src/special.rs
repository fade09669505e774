//! Double-precision evaluation of the transcendental ingredients: Gamma,
//! Pochhammer, the hypergeometric series 1F1 and 2F1 with derivatives, and
//! modified Bessel I.
//!
//! Half-integer Bessel orders get a dedicated path: the sinh/cosh weights are
//! carried as exact rational polynomials in 1/z, and the final combination is
//! evaluated in double-double arithmetic because the two products cancel
//! almost completely for small z.

use std::f64::consts::PI;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{rat_to_f64, Rational};

/// A computed value with a truncation-based relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub est_relerr: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("gamma pole at {0}")]
    Pole(f64),
    #[error("series did not converge within {MAX_TERMS} terms")]
    NoConvergence,
    #[error("argument outside the supported domain: {0}")]
    DomainError(&'static str),
}

const MAX_TERMS: usize = 500;

const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Gamma function; poles at the nonpositive integers are reported, not NaN.
pub fn gamma(x: f64) -> Result<SpecialValue, SpecialError> {
    if is_nonpositive_integer(x) {
        return Err(SpecialError::Pole(x));
    }
    Ok(SpecialValue {
        value: gamma_unchecked(x),
        est_relerr: 1e-13,
    })
}

/// 1/Gamma, defined everywhere: exactly 0 at the poles of Gamma.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}

/// Ascending factorial (a)_k = a (a+1) ... (a+k-1); empty product for k = 0.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    let mut prod = 1.0;
    for i in 0..k {
        prod *= a + i as f64;
    }
    prod
}

/// Sum a series given the first term and the ratio t_{k+1}/t_k.
///
/// Stops after three consecutive terms below 1e-17 of the partial sum, or at
/// the term cap. A capped sum with a still-large last term is an error;
/// otherwise the last-term magnitude becomes the error estimate.
fn sum_ratio_series(
    term0: f64,
    mut ratio: impl FnMut(usize) -> f64,
) -> Result<SpecialValue, SpecialError> {
    let mut term = term0;
    let mut sum = term0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        term *= ratio(k);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(SpecialValue {
                    value: sum,
                    est_relerr: f64::EPSILON,
                });
            }
        } else {
            small = 0;
        }
    }
    let scale = sum.abs().max(f64::MIN_POSITIVE);
    if term.abs() > 1e-9 * scale {
        return Err(SpecialError::NoConvergence);
    }
    Ok(SpecialValue {
        value: sum,
        est_relerr: term.abs() / scale,
    })
}

/// Confluent hypergeometric 1F1(a; b; x) and its x-derivative.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<(SpecialValue, SpecialValue), SpecialError> {
    if is_nonpositive_integer(b) {
        return Err(SpecialError::Pole(b));
    }
    let value = sum_ratio_series(1.0, |k| {
        let k = k as f64;
        (a + k) * x / ((b + k) * (k + 1.0))
    })?;
    let inner = sum_ratio_series(1.0, |k| {
        let k = k as f64;
        (a + 1.0 + k) * x / ((b + 1.0 + k) * (k + 1.0))
    })?;
    let deriv = SpecialValue {
        value: a / b * inner.value,
        est_relerr: inner.est_relerr,
    };
    Ok((value, deriv))
}

/// Gauss hypergeometric 2F1(a1, a2; b; x) and its x-derivative.
///
/// Nonterminating arguments are restricted to |x| <= 0.95; no analytic
/// continuation is attempted.
pub fn hyp2f1(
    a1: f64,
    a2: f64,
    b: f64,
    x: f64,
) -> Result<(SpecialValue, SpecialValue), SpecialError> {
    if is_nonpositive_integer(b) {
        return Err(SpecialError::Pole(b));
    }
    let terminating = is_nonpositive_integer(a1) || is_nonpositive_integer(a2);
    if !terminating && x.abs() > 0.95 {
        return Err(SpecialError::DomainError(
            "2F1 series argument must satisfy |x| <= 0.95 unless the series terminates",
        ));
    }
    let value = sum_ratio_series(1.0, |k| {
        let k = k as f64;
        (a1 + k) * (a2 + k) * x / ((b + k) * (k + 1.0))
    })?;
    let inner = sum_ratio_series(1.0, |k| {
        let k = k as f64;
        (a1 + 1.0 + k) * (a2 + 1.0 + k) * x / ((b + 1.0 + k) * (k + 1.0))
    })?;
    let deriv = SpecialValue {
        value: a1 * a2 / b * inner.value,
        est_relerr: inner.est_relerr,
    };
    Ok((value, deriv))
}

/// Modified Bessel function of the first kind, z > 0.
///
/// Half-integer orders use the finite sinh/cosh form with exactly computed
/// rational weights; everything else uses the ascending series. Negative
/// integer orders reduce to positive ones.
pub fn bessel_i(nu: f64, z: f64) -> Result<SpecialValue, SpecialError> {
    if !(z > 0.0) {
        return Err(SpecialError::DomainError("bessel_i requires z > 0"));
    }
    let two_nu = 2.0 * nu;
    if two_nu == two_nu.round() && (two_nu as i64).rem_euclid(2) == 1 && nu.abs() <= 60.5 {
        return Ok(bessel_half_integer(nu, z));
    }
    let nu = if nu == nu.round() && nu < 0.0 { -nu } else { nu };
    bessel_series(nu, z)
}

fn bessel_series(nu: f64, z: f64) -> Result<SpecialValue, SpecialError> {
    let half = z / 2.0;
    let term0 = half.powf(nu) * recip_gamma(nu + 1.0);
    let quarter_sq = half * half;
    sum_ratio_series(term0, |k| {
        let k = k as f64;
        quarter_sq / ((k + 1.0) * (nu + k + 1.0))
    })
}

/// Sinh/cosh weight polynomials in 1/z for order sign(nu) * (m + 1/2),
/// grown by the three-term recurrence from the orders +-1/2.
fn sinh_cosh_weights(m: usize, positive: bool) -> (Vec<Rational>, Vec<Rational>) {
    let w_plus = (vec![Rational::from_integer(1.into())], Vec::new());
    let w_minus = (Vec::new(), vec![Rational::from_integer(1.into())]);
    let (mut prev, mut cur) = if positive {
        (w_minus, w_plus)
    } else {
        (w_plus, w_minus)
    };
    for k in 0..m {
        let factor = Rational::from_integer((2 * k as i64 + 1).into());
        let next_s = sub_shifted(&prev.0, &cur.0, &factor);
        let next_c = sub_shifted(&prev.1, &cur.1, &factor);
        prev = cur;
        cur = (next_s, next_c);
    }
    cur
}

/// base - factor * (poly shifted one power of 1/z up), as coefficient vectors.
fn sub_shifted(base: &[Rational], poly: &[Rational], factor: &Rational) -> Vec<Rational> {
    let len = base.len().max(poly.len() + 1);
    let mut out = vec![Rational::zero(); len];
    out[..base.len()].clone_from_slice(base);
    for (k, c) in poly.iter().enumerate() {
        out[k + 1] -= factor * c;
    }
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn bessel_half_integer(nu: f64, z: f64) -> SpecialValue {
    let m = (nu.abs() - 0.5).round() as usize;
    let (s_coeffs, c_coeffs) = sinh_cosh_weights(m, nu > 0.0);
    let inv_z = dd_inv(z);
    let s = dd_poly(&s_coeffs, inv_z);
    let c = dd_poly(&c_coeffs, inv_z);
    let (sh, ch) = if z <= 4.0 {
        dd_sinh_cosh(z)
    } else {
        ((z.sinh(), 0.0), (z.cosh(), 0.0))
    };
    let w = dd_add(dd_mul(s, sh), dd_mul(c, ch));
    let value = (2.0 / (PI * z)).sqrt() * (w.0 + w.1);
    let big = (s.0 * sh.0).abs() + (c.0 * ch.0).abs();
    let cancel = big / (w.0 + w.1).abs().max(f64::MIN_POSITIVE);
    let est_relerr = if z <= 4.0 {
        2.0 * f64::EPSILON * (1.0 + 1e-16 * cancel)
    } else {
        f64::EPSILON * (1.0 + cancel)
    };
    SpecialValue { value, est_relerr }
}

// Double-double helpers: an unevaluated sum (hi, lo) carrying ~31 digits.

type Dd = (f64, f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bv = s - a;
    (s, (a - (s - bv)) + (b - bv))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn dd_add(x: Dd, y: Dd) -> Dd {
    let (s, e) = two_sum(x.0, y.0);
    quick_two_sum(s, e + x.1 + y.1)
}

fn dd_mul(x: Dd, y: Dd) -> Dd {
    let (p, e) = two_prod(x.0, y.0);
    quick_two_sum(p, e + x.0 * y.1 + x.1 * y.0)
}

fn dd_div_f64(x: Dd, d: f64) -> Dd {
    let q0 = x.0 / d;
    let (p, e) = two_prod(q0, d);
    let r = ((x.0 - p) - e + x.1) / d;
    quick_two_sum(q0, r)
}

fn dd_inv(z: f64) -> Dd {
    let q0 = 1.0 / z;
    let e = q0.mul_add(-z, 1.0);
    quick_two_sum(q0, e / z)
}

fn rat_to_dd(r: &Rational) -> Dd {
    let hi = rat_to_f64(r);
    match Rational::from_float(hi) {
        Some(hi_exact) => {
            let lo = rat_to_f64(&(r - hi_exact));
            quick_two_sum(hi, lo)
        }
        None => (hi, 0.0),
    }
}

fn dd_poly(coeffs: &[Rational], u: Dd) -> Dd {
    let mut acc = (0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = dd_add(dd_mul(acc, u), rat_to_dd(c));
    }
    acc
}

/// Taylor sinh and cosh in double-double, adequate for 0 < z <= 4.
fn dd_sinh_cosh(z: f64) -> (Dd, Dd) {
    let zz = two_prod(z, z);
    let mut sh = (z, 0.0);
    let mut ch = (1.0, 0.0);
    let mut t_s = (z, 0.0);
    let mut t_c = (1.0, 0.0);
    for k in 1..=40u32 {
        let a = (2 * k) as f64;
        t_c = dd_div_f64(dd_mul(t_c, zz), (a - 1.0) * a);
        ch = dd_add(ch, t_c);
        t_s = dd_div_f64(dd_mul(t_s, zz), a * (a + 1.0));
        sh = dd_add(sh, t_s);
        if t_c.0.abs() < 1e-34 * ch.0.abs() && t_s.0.abs() < 1e-34 * sh.0.abs() {
            break;
        }
    }
    (sh, ch)
}
