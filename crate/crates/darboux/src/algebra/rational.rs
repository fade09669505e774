//! Arbitrary-precision rationals, thin helpers over `num_rational`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number in canonical reduced form (positive denominator,
/// gcd(|num|, den) = 1); the invariant is maintained by `num_rational`.
pub type Rational = num_rational::BigRational;

/// `n/d` as a `Rational`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `Rational`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "n", "-n/d", or an exact decimal like "0.3" (converted to 3/10).
pub fn rat_from_str(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator in {s:?}"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let digits = frac_part.trim();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid decimal in {s:?}"));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            "0"
        } else {
            int_part
        };
        let whole: BigInt = int_part
            .parse()
            .map_err(|_| format!("invalid integer part in {s:?}"))?;
        let frac: BigInt = digits
            .parse()
            .map_err(|_| format!("invalid fractional part in {s:?}"))?;
        let scale = BigInt::from(10u32).pow(digits.len() as u32);
        let frac = Rational::new(frac, scale);
        let whole = Rational::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    let n: BigInt = s.parse().map_err(|_| format!("invalid rational {s:?}"))?;
    Ok(Rational::from_integer(n))
}

/// Greatest r with a/r and b/r both integers; 0 only if both inputs are 0.
pub(crate) fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

/// Nearest double; large values saturate through BigInt's own conversion.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(if r.numer().is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_after_arithmetic() {
        let a = rat(6, -4);
        assert_eq!(a, rat(-3, 2));
        assert!(a.denom() > &BigInt::zero());
        let b = rat(1, 3) + rat(1, 6);
        assert_eq!(b, rat(1, 2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(rat_from_str("3").unwrap(), rat_int(3));
        assert_eq!(rat_from_str("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(rat_from_str("0.3").unwrap(), rat(3, 10));
        assert_eq!(rat_from_str("-1.25").unwrap(), rat(-5, 4));
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("abc").is_err());
    }

    #[test]
    fn f64_conversion() {
        assert_eq!(rat_to_f64(&rat(1, 2)), 0.5);
        assert_eq!(rat_to_f64(&rat(-3, 10)), -0.3);
    }
}
