//! Rational functions num/den over `Poly2`.

use num_traits::{Signed, Zero};

use super::poly::{univariate_gcd, Poly2, Var};
use super::rational::Rational;

/// Quotient of two polynomials; the denominator is never zero. Values are
/// kept simplified up to the limited gcd the crate computes (rational
/// content plus univariate Euclid when a shared variable layout allows it).
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Poly2,
    pub den: Poly2,
}

impl RatFn {
    pub fn new(num: Poly2, den: Poly2) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RatFn { num, den }.simplify()
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFn {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn zero() -> Self {
        RatFn::from_poly(Poly2::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(q)` when the denominator divides the numerator exactly.
    pub fn as_polynomial(&self) -> Option<Poly2> {
        self.num.divexact(&self.den)
    }

    pub fn add(&self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn mul(&self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn mul_poly(&self, p: &Poly2) -> RatFn {
        RatFn::new(&self.num * p, self.den.clone())
    }

    pub fn div(&self, rhs: &RatFn) -> RatFn {
        assert!(!rhs.num.is_zero(), "division by zero rational function");
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// Equality as rational functions (cross multiplication).
    pub fn eq_ratfn(&self, rhs: &RatFn) -> bool {
        &self.num * &rhs.den == &rhs.num * &self.den
    }

    /// Removes shared rational content, normalizes the denominator's leading
    /// coefficient to be positive, and cancels a univariate polynomial gcd
    /// when one side is univariate (content-wise) in a variable.
    pub fn simplify(self) -> RatFn {
        if self.num.is_zero() {
            return RatFn {
                num: Poly2::zero(),
                den: Poly2::one(),
            };
        }
        let mut num = self.num;
        let mut den = self.den;
        for var in [Var::X, Var::Y] {
            if let Some(g) = shared_univariate_gcd(&num, &den, var) {
                if g.degree() > 0 {
                    num = num.divexact(&g).expect("gcd divides numerator");
                    den = den.divexact(&g).expect("gcd divides denominator");
                }
            }
        }
        let mut cd = den.content();
        if den.leading().expect("nonzero denominator").1.is_negative() {
            cd = -cd;
        }
        let inv = cd.recip();
        RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.num.eval_f64(x, y) / self.den.eval_f64(x, y)
    }

    pub fn partial(&self, var: Var) -> RatFn {
        // (n/d)' = (n' d - n d') / d^2
        let n = &(&self.num.partial(var) * &self.den) - &(&self.num * &self.den.partial(var));
        RatFn::new(n, &self.den * &self.den)
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.eq_ratfn(other)
    }
}

/// Univariate gcd of `a` and `b` in `var` when both are univariate in it;
/// when only one is, folds the Euclid over the other's coefficient slices in
/// the second variable.
fn shared_univariate_gcd(a: &Poly2, b: &Poly2, var: Var) -> Option<Poly2> {
    let slices_a = univariate_slices(a, var)?;
    let slices_b = univariate_slices(b, var)?;
    let mut g: Option<Vec<Rational>> = None;
    for s in slices_a.iter().chain(slices_b.iter()) {
        g = Some(match g {
            None => s.clone(),
            Some(prev) => univariate_gcd(&prev, s),
        });
        if g.as_ref().is_some_and(|v| v.len() <= 1) {
            return None;
        }
    }
    g.map(|coeffs| Poly2::from_univariate(var, &coeffs))
}

/// Slices of `p` along powers of the variable other than `var`, each a
/// univariate coefficient vector in `var`; `None` if `p` is zero.
fn univariate_slices(p: &Poly2, var: Var) -> Option<Vec<Vec<Rational>>> {
    if p.is_zero() {
        return None;
    }
    let other = match var {
        Var::X => Var::Y,
        Var::Y => Var::X,
    };
    let max_other = p.degree_in(other) as u32;
    let max_var = p.degree_in(var) as u32;
    let mut slices = vec![vec![Rational::zero(); max_var as usize + 1]; max_other as usize + 1];
    for (m, c) in p.terms() {
        let (kv, ko) = match var {
            Var::X => (m.i, m.j),
            Var::Y => (m.j, m.i),
        };
        slices[ko as usize][kv as usize] = c.clone();
    }
    slices.retain(|s| s.iter().any(|c| !c.is_zero()));
    Some(slices)
}
