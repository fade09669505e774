//! Sparse bivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat_to_f64, Rational};

/// Variable selector for partial derivatives and univariate views.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

/// Exponent pair `x^i y^j`, ordered graded-lexicographically with x before y,
/// so the maximum key of a term map is the leading monomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub fn new(i: u32, j: u32) -> Self {
        Monomial { i, j }
    }

    pub fn total_degree(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total_degree(), self.i).cmp(&(other.total_degree(), other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in x and y with `Rational` coefficients. Zero
/// coefficients are never stored; the zero polynomial has an empty term map
/// and degree -1.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly2::monomial(0, 0, c)
    }

    pub fn var_x() -> Self {
        Poly2::monomial(1, 0, Rational::one())
    }

    pub fn var_y() -> Self {
        Poly2::monomial(0, 1, Rational::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(i, j), c);
        }
        Poly2 { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(iter: I) -> Self {
        let mut p = Poly2::zero();
        for ((i, j), c) in iter {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() <= 0
    }

    /// Total degree; -1 for the zero polynomial by convention.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| i64::from(m.total_degree()))
            .max()
            .unwrap_or(-1)
    }

    pub fn degree_in(&self, var: Var) -> i64 {
        self.terms
            .keys()
            .map(|m| i64::from(match var {
                Var::X => m.i,
                Var::Y => m.j,
            }))
            .max()
            .unwrap_or(-1)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in descending monomial order (printing order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(Monomial, &Rational)> {
        self.terms.last_key_value().map(|(m, c)| (*m, c))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        let mut acc = Poly2::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let (m2, factor) = match var {
                Var::X => {
                    if m.i == 0 {
                        continue;
                    }
                    (Monomial::new(m.i - 1, m.j), Rational::from_integer(BigInt::from(m.i)))
                }
                Var::Y => {
                    if m.j == 0 {
                        continue;
                    }
                    (Monomial::new(m.i, m.j - 1), Rational::from_integer(BigInt::from(m.j)))
                }
            };
            out.add_term(m2, c.clone() * factor);
        }
        out
    }

    pub fn partial_x(&self) -> Poly2 {
        self.partial(Var::X)
    }

    pub fn partial_y(&self) -> Poly2 {
        self.partial(Var::Y)
    }

    /// Exact division: `Some(q)` with `q * b == self`, or `None` if any
    /// remainder survives. Peels leading terms in the monomial order, which
    /// decides exact divisibility (no tolerance anywhere).
    pub fn divexact(&self, b: &Poly2) -> Option<Poly2> {
        assert!(!b.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        let (bm, bc) = b.leading().expect("nonzero divisor");
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero remainder");
            if rm.i < bm.i || rm.j < bm.j {
                return None;
            }
            let qm = Monomial::new(rm.i - bm.i, rm.j - bm.j);
            let qc = rc.clone() / bc.clone();
            let t = Poly2::monomial(qm.i, qm.j, qc);
            rem = &rem - &(&t * b);
            // leading term cancels by construction, so the loop terminates
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Positive rational content: gcd of numerators over lcm of denominators.
    /// Zero polynomial has content 0.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Splits into `(scale, primitive)` with `self == primitive * scale`,
    /// integer coefficients with gcd 1 and positive leading coefficient in
    /// the primitive part. Returns `(0, 0)` for zero.
    pub fn primitive(&self) -> (Rational, Poly2) {
        if self.is_zero() {
            return (Rational::zero(), Poly2::zero());
        }
        let mut scale = self.content();
        if self.leading().expect("nonzero").1.is_negative() {
            scale = -scale;
        }
        let inv = scale.clone().recip();
        (scale, self.scale(&inv))
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += rat_to_f64(c) * x.powi(m.i as i32) * y.powi(m.j as i32);
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m.i {
                t *= x.clone();
            }
            for _ in 0..m.j {
                t *= y.clone();
            }
            acc += t;
        }
        acc
    }

    /// Substitutes polynomials for both variables.
    pub fn compose(&self, x_sub: &Poly2, y_sub: &Poly2) -> Poly2 {
        let mut acc = Poly2::zero();
        for (m, c) in &self.terms {
            let t = &x_sub.pow(m.i) * &y_sub.pow(m.j);
            acc = &acc + &t.scale(c);
        }
        acc
    }

    /// Ascending coefficient vector if univariate in `var` (the other
    /// variable absent); constants count as univariate in either.
    pub fn as_univariate(&self, var: Var) -> Option<Vec<Rational>> {
        let other = match var {
            Var::X => Var::Y,
            Var::Y => Var::X,
        };
        if self.degree_in(other) > 0 {
            return None;
        }
        let deg = self.degree_in(var).max(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            let k = match var {
                Var::X => m.i,
                Var::Y => m.j,
            };
            coeffs[k as usize] = c.clone();
        }
        Some(coeffs)
    }

    pub fn from_univariate(var: Var, coeffs: &[Rational]) -> Poly2 {
        let mut p = Poly2::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = match var {
                Var::X => Monomial::new(k as u32, 0),
                Var::Y => Monomial::new(0, k as u32),
            };
            p.add_term(m, c.clone());
        }
        p
    }

    /// True when every variable that actually occurs is `var` or none.
    pub fn is_univariate_in(&self, var: Var) -> bool {
        self.as_univariate(var).is_some()
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(
                    Monomial::new(ma.i + mb.i, ma.j + mb.j),
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, -c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::exprparse::format_poly(self))
    }
}

/// Univariate gcd by the Euclidean algorithm on ascending coefficient
/// vectors; result is monic. Used by rational-function simplification and
/// the square-root predicate.
pub(crate) fn univariate_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    fn trim(v: &mut Vec<Rational>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }
    fn rem(mut a: Vec<Rational>, b: &[Rational]) -> Vec<Rational> {
        let db = b.len() - 1;
        let lb = b.last().expect("nonzero divisor").clone();
        while a.len() > db {
            let la = a.last().expect("nonempty").clone();
            let q = la / lb.clone();
            let shift = a.len() - 1 - db;
            for (k, bc) in b.iter().enumerate() {
                let idx = shift + k;
                let v = a[idx].clone() - q.clone() * bc.clone();
                a[idx] = v;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        a
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(a, &b);
        a = b;
        b = r;
    }
    if let Some(lc) = a.last().cloned() {
        let inv = lc.recip();
        for c in &mut a {
            *c *= inv.clone();
        }
    }
    a
}

/// Formal square root of a univariate polynomial over the reals: requires
/// even degree and positive leading coefficient, then extracts the monic
/// square root over Q coefficient by coefficient (it is unique if it exists)
/// and verifies by squaring. Returns the root with positive leading
/// coefficient, including the scalar factor, when `p` is a perfect square in
/// R[t] with rational `p`.
pub(crate) fn univariate_sqrt_real(p: &[Rational]) -> Option<Vec<Rational>> {
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        return Some(vec![]);
    }
    let deg = p.len() - 1;
    if deg % 2 != 0 {
        return None;
    }
    let lc = p.last().expect("nonzero").clone();
    if lc.is_negative() {
        return None;
    }
    // p = lc * m with m monic; p is a real square iff m is a square in Q[t].
    let inv = lc.clone().recip();
    let m: Vec<Rational> = p.iter().map(|c| c.clone() * inv.clone()).collect();
    let hd = deg / 2;
    let mut r = vec![Rational::zero(); hd + 1];
    r[hd] = Rational::one();
    // determine r from the top: coefficient of t^(deg-k) in r^2 must match m;
    // acc collects the ordered pairs not involving the unknown r[hd-k]
    for k in 1..=hd {
        let idx = deg - k;
        let mut acc = Rational::zero();
        for a in (hd - k + 1)..=hd {
            let b = idx as i64 - a as i64;
            if b < (hd - k + 1) as i64 || b as usize > hd {
                continue;
            }
            acc += r[a].clone() * r[b as usize].clone();
        }
        // 2*r[hd]*r[hd-k] + acc = m[idx], with r[hd] = 1
        r[hd - k] = (m[idx].clone() - acc) / Rational::from_integer(BigInt::from(2));
    }
    // verify r^2 == m exactly
    let mut sq = vec![Rational::zero(); 2 * hd + 1];
    for (a, ca) in r.iter().enumerate() {
        for (b, cb) in r.iter().enumerate() {
            sq[a + b] += ca.clone() * cb.clone();
        }
    }
    if sq.len() != m.len() || sq.iter().zip(m.iter()).any(|(a, b)| a != b) {
        return None;
    }
    // scale back: sqrt(p) = sqrt(lc) * r, rational only if lc is a square
    let (ln, ld) = (lc.numer().sqrt(), lc.denom().sqrt());
    if &ln * &ln == *lc.numer() && &ld * &ld == *lc.denom() {
        let s = Rational::new(ln, ld);
        Some(r.into_iter().map(|c| c * s.clone()).collect())
    } else {
        // square in R[t] but not in Q[t]; still a perfect square for the
        // irreducibility criterion's purposes, report the monic root
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rat_int};

    fn xp() -> Poly2 {
        Poly2::var_x()
    }

    fn yp() -> Poly2 {
        Poly2::var_y()
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = &xp() + &yp();
        let b = &xp() - &yp();
        let prod = &a * &b;
        let expect = &(&xp() * &xp()) - &(&yp() * &yp());
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_by_zero_annihilates() {
        let p = &(&xp() * &(&xp() * &xp())) + &Poly2::one();
        assert!((&Poly2::zero() * &p).is_zero());
    }

    #[test]
    fn mul_cross_terms() {
        // (2x+1)(3y) = 6xy + 3y
        let a = &xp().scale(&rat_int(2)) + &Poly2::one();
        let b = yp().scale(&rat_int(3));
        let prod = &a * &b;
        assert_eq!(
            prod,
            Poly2::from_terms([((1, 1), rat_int(6)), ((0, 1), rat_int(3))])
        );
    }

    #[test]
    fn partial_derivatives() {
        // d/dy (x^2 y + y^3) = x^2 + 3y^2
        let p = Poly2::from_terms([((2, 1), rat_int(1)), ((0, 3), rat_int(1))]);
        assert_eq!(
            p.partial_y(),
            Poly2::from_terms([((2, 0), rat_int(1)), ((0, 2), rat_int(3))])
        );
        assert!(Poly2::constant(rat_int(5)).partial_x().is_zero());
        let q = Poly2::monomial(3, 2, rat_int(1));
        assert_eq!(q.partial_x(), Poly2::monomial(2, 2, rat_int(3)));
    }

    #[test]
    fn divexact_basic() {
        let num = &(&xp() * &xp()) - &(&yp() * &yp());
        let den = &xp() - &yp();
        assert_eq!(num.divexact(&den).unwrap(), &xp() + &yp());

        let bad = &(&xp() * &xp()) + &Poly2::one();
        assert!(bad.divexact(&xp()).is_none());
    }

    #[test]
    fn divexact_certificate_quotient() {
        // (2y + 2x + 2xy^2 - 2x^3) / (2 + 2xy - 2x^2) = x + y
        let num = Poly2::from_terms([
            ((0, 1), rat_int(2)),
            ((1, 0), rat_int(2)),
            ((1, 2), rat_int(2)),
            ((3, 0), rat_int(-2)),
        ]);
        let den = Poly2::from_terms([
            ((0, 0), rat_int(2)),
            ((1, 1), rat_int(2)),
            ((2, 0), rat_int(-2)),
        ]);
        let q = num.divexact(&den).unwrap();
        assert_eq!(q, &xp() + &yp());
        assert_eq!(&q * &den, num);
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(Poly2::zero().degree(), -1);
        assert_eq!(Poly2::one().degree(), 0);
        assert_eq!(Poly2::monomial(2, 3, rat_int(4)).degree(), 5);
    }

    #[test]
    fn content_and_primitive() {
        let p = Poly2::from_terms([((1, 0), rat(4, 3)), ((0, 1), rat(-2, 9))]);
        let (s, prim) = p.primitive();
        assert_eq!(prim, Poly2::from_terms([((1, 0), rat_int(6)), ((0, 1), rat_int(-1))]));
        assert_eq!(prim.scale(&s), p);
        // negative leading coefficient flips the scale sign
        let q = Poly2::from_terms([((2, 0), rat_int(-2)), ((0, 0), rat_int(4))]);
        let (s2, prim2) = q.primitive();
        assert!(prim2.leading().unwrap().1 > &Rational::zero());
        assert_eq!(prim2.scale(&s2), q);
    }

    #[test]
    fn mixed_partials_commute() {
        let p = Poly2::from_terms([
            ((3, 2), rat(7, 2)),
            ((1, 4), rat_int(-3)),
            ((2, 0), rat_int(5)),
        ]);
        assert_eq!(p.partial_x().partial_y(), p.partial_y().partial_x());
    }

    #[test]
    fn univariate_views() {
        let p = Poly2::from_terms([((2, 0), rat_int(3)), ((0, 0), rat_int(-1))]);
        assert_eq!(
            p.as_univariate(Var::X).unwrap(),
            vec![rat_int(-1), rat_int(0), rat_int(3)]
        );
        assert!(p.as_univariate(Var::Y).is_none());
        assert!(Poly2::constant(rat_int(2)).is_univariate_in(Var::X));
        assert!(Poly2::constant(rat_int(2)).is_univariate_in(Var::Y));
    }

    #[test]
    fn univariate_gcd_monic() {
        // gcd(x^2-1, x-1) = x-1 (monic)
        let a = vec![rat_int(-1), rat_int(0), rat_int(1)];
        let b = vec![rat_int(-1), rat_int(1)];
        assert_eq!(univariate_gcd(&a, &b), vec![rat_int(-1), rat_int(1)]);
    }

    #[test]
    fn sqrt_real_detects_squares() {
        // (2t^2 - 3)^2 = 4t^4 - 12t^2 + 9
        let sq = vec![rat_int(9), rat_int(0), rat_int(-12), rat_int(0), rat_int(4)];
        let r = univariate_sqrt_real(&sq).unwrap();
        assert_eq!(r, vec![rat_int(-3), rat_int(0), rat_int(2)]);
        // 4u (odd degree) is not a square
        assert!(univariate_sqrt_real(&[rat_int(0), rat_int(4)]).is_none());
        // -t^2 has negative leading coefficient
        assert!(univariate_sqrt_real(&[rat_int(0), rat_int(0), rat_int(-1)]).is_none());
        // 2t^2 is a square in R[t] (sqrt(2) t) though not in Q[t]
        assert!(univariate_sqrt_real(&[rat_int(0), rat_int(0), rat_int(2)]).is_some());
        // t^2 + 1 is not a square anywhere
        assert!(univariate_sqrt_real(&[rat_int(1), rat_int(0), rat_int(1)]).is_none());
    }

    #[test]
    fn compose_substitutes() {
        // p(x,y) = x^2 + y at x := x y, y := x -> x^2 y^2 + x
        let p = Poly2::from_terms([((2, 0), rat_int(1)), ((0, 1), rat_int(1))]);
        let sub = p.compose(&(&xp() * &yp()), &xp());
        assert_eq!(
            sub,
            Poly2::from_terms([((2, 2), rat_int(1)), ((1, 0), rat_int(1))])
        );
    }
}
