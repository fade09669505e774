//! Four worked families of planar systems with certified invariant objects
//! and numerically evaluable first integrals built from fundamental pairs
//! of linear-ODE solutions: the orthogonal-polynomial family, a
//! Lotka-Volterra family, a quadratic family with an invariant line and
//! parabola, and a one-parameter family of centers.

use num_traits::One;
use thiserror::Error;

use crate::algebra::{rat_int, Monomial, Poly2, RatFn, Rational, Var};
use crate::construct::PlanarSystem;
use crate::special::SpecialError;

pub mod center;
pub mod lv;
pub mod newfam;
pub mod orth;

pub use center::{center_conic_and_h, center_line_object, center_system};
pub use lv::{lv_h_eval, lv_invariant_poly, lv_map, lv_system};
pub use newfam::{newfam_h_eval, newfam_invariant, newfam_map, newfam_system};
pub use orth::{
    algcurve_linear_y, orth_system, orthfam_h_eval, orthpoly_solve, OrthFamilySpec, OrthKind,
};

/// Failure while building a family member or one of its attached objects.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("parameter guard violated: need {0}")]
    GuardViolation(&'static str),
    #[error("the linear ODE has no polynomial solution of the requested degree")]
    NoPolynomialSolution,
    #[error("the two displayed solutions are linearly dependent: {0}")]
    LinearDependence(&'static str),
    #[error("a series parameter sits at a pole: {0}")]
    Pole(&'static str),
    #[error("a substituted denominator is not a monomial, so clearing would not terminate")]
    DenominatorCollapse,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Failure at a specific evaluation point of a closed-form first integral.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("point outside the domain: {0}")]
    DomainError(&'static str),
    #[error("the denominator of the solution ratio vanishes here")]
    DivByZero,
}

impl From<SpecialError> for EvalError {
    fn from(e: SpecialError) -> EvalError {
        match e {
            SpecialError::Pole(_) => EvalError::DomainError("special-function parameter pole"),
            SpecialError::NoConvergence => {
                EvalError::DomainError("special-function series did not converge")
            }
            SpecialError::DomainError(s) => EvalError::DomainError(s),
        }
    }
}

/// A fundamental pair of solutions of a scalar linear ODE, evaluated
/// numerically: `eval(s)` returns `(w1, w1', w2, w2')` or `None` where the
/// closed form cannot be computed. Implements [`crate::dynamics::SolutionPair`]
/// through the blanket closure impl via [`FundamentalPair::as_fn`].
pub struct FundamentalPair {
    label: String,
    f: Box<dyn Fn(f64) -> Option<(f64, f64, f64, f64)> + Send + Sync>,
}

impl FundamentalPair {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> Option<(f64, f64, f64, f64)> + Send + Sync + 'static,
    ) -> Self {
        FundamentalPair {
            label: label.into(),
            f: Box::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, s: f64) -> Option<(f64, f64, f64, f64)> {
        (self.f)(s)
    }

    /// Closure view, usable wherever a `SolutionPair` is expected.
    pub fn as_fn(&self) -> impl Fn(f64) -> Option<(f64, f64, f64, f64)> + '_ {
        move |s| self.eval(s)
    }
}

impl std::fmt::Debug for FundamentalPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FundamentalPair")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// A numerically evaluable first integral H(x, y). Construction either wraps
/// a closed-form expression directly or takes the ratio of the two invariants
/// g1 w' - g0 w attached to a fundamental pair.
pub struct FirstIntegralEvaluator {
    label: String,
    f: Box<dyn Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync>,
}

impl FirstIntegralEvaluator {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    ) -> Self {
        FirstIntegralEvaluator {
            label: label.into(),
            f: Box::new(f),
        }
    }

    /// Ratio (g1 w1' - g0 w1) / (g1 w2' - g0 w2) of the invariants attached
    /// to `pair`, pulled back along a coordinate change. `coords` maps a
    /// system point (x, y) to the ODE-side point (s, t) with s the ODE
    /// variable; `g` evaluates (g0, g1) at (s, t).
    pub fn from_pair<C, G>(label: impl Into<String>, pair: FundamentalPair, coords: C, g: G) -> Self
    where
        C: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
        G: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        let f = move |x: f64, y: f64| -> Result<f64, EvalError> {
            let (s, t) = coords(x, y);
            if !s.is_finite() || !t.is_finite() {
                return Err(EvalError::DomainError("coordinate change undefined here"));
            }
            let (w1, w1d, w2, w2d) = pair
                .eval(s)
                .ok_or(EvalError::DomainError("fundamental pair undefined here"))?;
            let (g0, g1) = g(s, t);
            let den = g1 * w2d - g0 * w2;
            if den == 0.0 {
                return Err(EvalError::DivByZero);
            }
            let h = (g1 * w1d - g0 * w1) / den;
            if h.is_finite() {
                Ok(h)
            } else {
                Err(EvalError::DomainError("solution ratio overflowed"))
            }
        };
        FirstIntegralEvaluator {
            label: label.into(),
            f: Box::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        (self.f)(x, y)
    }

    /// Adapter for [`crate::dynamics::drift`]: evaluation errors become
    /// skipped samples.
    pub fn drift_fn(&self) -> impl Fn(f64, f64) -> Option<f64> + '_ {
        move |x, y| self.eval(x, y).ok()
    }
}

impl std::fmt::Debug for FirstIntegralEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FirstIntegralEvaluator")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// Substitute rational functions for x and y in a polynomial.
fn subst_poly(p: &Poly2, xs: &RatFn, ys: &RatFn) -> RatFn {
    let mut acc = RatFn::zero();
    for (m, c) in p.terms() {
        let mut term = RatFn::from_poly(Poly2::constant(c.clone()));
        for _ in 0..m.i {
            term = term.mul(xs);
        }
        for _ in 0..m.j {
            term = term.mul(ys);
        }
        acc = acc.add(&term);
    }
    acc
}

/// Substitute rational functions for x and y in a rational function.
fn subst_ratfn(r: &RatFn, xs: &RatFn, ys: &RatFn) -> RatFn {
    subst_poly(&r.num, xs, ys).div(&subst_poly(&r.den, xs, ys))
}

/// A birational change of coordinates between an original chart (x, y) and a
/// transformed chart (X, Y), stored as both substitution directions.
/// `old_from_new` expresses (x, y) in terms of (X, Y); `new_from_old` the
/// reverse. Construction checks symbolically that the two compositions are
/// the identity.
#[derive(Debug, Clone)]
pub struct BirationalMap {
    old_from_new: (RatFn, RatFn),
    new_from_old: (RatFn, RatFn),
}

impl BirationalMap {
    pub fn new(old_from_new: (RatFn, RatFn), new_from_old: (RatFn, RatFn)) -> Self {
        let x = RatFn::from_poly(Poly2::var_x());
        let y = RatFn::from_poly(Poly2::var_y());
        let xi = subst_ratfn(&old_from_new.0, &new_from_old.0, &new_from_old.1);
        let yi = subst_ratfn(&old_from_new.1, &new_from_old.0, &new_from_old.1);
        assert!(
            xi.eq_ratfn(&x) && yi.eq_ratfn(&y),
            "substituting the forward map into the inverse must give the identity"
        );
        let ui = subst_ratfn(&new_from_old.0, &old_from_new.0, &old_from_new.1);
        let vi = subst_ratfn(&new_from_old.1, &old_from_new.0, &old_from_new.1);
        assert!(
            ui.eq_ratfn(&x) && vi.eq_ratfn(&y),
            "substituting the inverse map into the forward must give the identity"
        );
        BirationalMap {
            old_from_new,
            new_from_old,
        }
    }

    pub fn old_from_new(&self) -> &(RatFn, RatFn) {
        &self.old_from_new
    }

    pub fn new_from_old(&self) -> &(RatFn, RatFn) {
        &self.new_from_old
    }
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive_positive(p: &Poly2) -> Poly2 {
    p.primitive().1
}

/// Pull a polynomial invariant in the transformed chart back to the original
/// chart: substitute `new_from_old` and return the primitive numerator of
/// the result in lowest terms. Requires both substituted denominators to be
/// monomials, so the cleared denominator stays a monomial and the reduction
/// only strips monomial factors introduced by the clearing itself.
pub fn birational_pullback(map: &BirationalMap, f: &Poly2) -> Result<Poly2, FamilyError> {
    let (us, vs) = &map.new_from_old;
    for s in [us, vs] {
        if s.den.terms().count() != 1 {
            return Err(FamilyError::DenominatorCollapse);
        }
    }
    let imax = f.degree_in(Var::X).max(0) as u32;
    let jmax = f.degree_in(Var::Y).max(0) as u32;
    let clearing = &us.den.pow(imax) * &vs.den.pow(jmax);
    let cleared_exp = clearing.terms().next().expect("monomial product").0;
    let mut acc = Poly2::zero();
    for (m, c) in f.terms() {
        let term = &(&us.num.pow(m.i) * &us.den.pow(imax - m.i))
            * &(&vs.num.pow(m.j) * &vs.den.pow(jmax - m.j));
        acc = &acc + &term.scale(c);
    }
    if acc.is_zero() {
        return Ok(acc);
    }
    let common = min_monomial(&acc).expect("nonzero");
    let mi = common.i.min(cleared_exp.i);
    let mj = common.j.min(cleared_exp.j);
    if mi > 0 || mj > 0 {
        acc = acc
            .divexact(&Poly2::monomial(mi, mj, Rational::one()))
            .expect("the common monomial divides every term");
    }
    Ok(primitive_positive(&acc))
}

/// Parameter choices selecting one member of one of the four families.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams {
    Orth(orth::OrthFamilySpec),
    Lv { ell: Rational },
    New { a: Rational, ell: Rational },
    Center { a: Rational, b: Rational, d: Rational },
}

/// The planar system for a family member, after guard checks.
pub fn family_system(params: &FamilyParams) -> Result<PlanarSystem, FamilyError> {
    match params {
        FamilyParams::Orth(spec) => Ok(orth::orth_system(spec)),
        FamilyParams::Lv { ell } => lv::lv_system(ell),
        FamilyParams::New { a, ell } => newfam::newfam_system(a, ell),
        FamilyParams::Center { a, b, d } => center::center_system(a, b, d),
    }
}

/// Exact factorial as a rational, for closed-form series coefficients.
pub(crate) fn factorial(n: i64) -> Rational {
    assert!(n >= 0, "factorial of a negative integer");
    let mut acc = Rational::one();
    for i in 2..=n {
        acc *= rat_int(i);
    }
    acc
}

/// Pochhammer symbol (a)_k over the rationals.
pub(crate) fn pochhammer_rat(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= a + rat_int(i as i64);
    }
    acc
}

pub(crate) fn all_finite(v: (f64, f64, f64, f64)) -> bool {
    v.0.is_finite() && v.1.is_finite() && v.2.is_finite() && v.3.is_finite()
}

/// Exponent-wise minimum over the monomials of a nonzero polynomial.
fn min_monomial(p: &Poly2) -> Option<Monomial> {
    let mut it = p.terms();
    let first = it.next()?.0;
    let mut mi = first.i;
    let mut mj = first.j;
    for (m, _) in it {
        mi = mi.min(m.i);
        mj = mj.min(m.j);
    }
    Some(Monomial { i: mi, j: mj })
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;

    use super::*;
    use crate::algebra::rat;
    use crate::exprparse::parse_poly;

    fn p(s: &str) -> Poly2 {
        parse_poly(s).expect("test polynomial parses")
    }

    fn rf(num: &str, den: &str) -> RatFn {
        RatFn::new(p(num), p(den))
    }

    #[test]
    fn pullback_clears_monomial_denominators() {
        // u = x y, v = 1/(4 y): the map used by the Lotka-Volterra family
        // at ell = 0 (up to the sign convention).
        let map = BirationalMap::new(
            (rf("4*x*y", "1"), rf("1", "4*y")),
            (rf("x*y", "1"), rf("1", "4*y")),
        );
        let f = p("x");
        assert_eq!(birational_pullback(&map, &f).unwrap(), p("x*y"));
    }

    #[test]
    fn pullback_strips_shared_monomial_factors() {
        let map = BirationalMap::new(
            (rf("1", "x"), rf("y", "1")),
            (rf("1", "x"), rf("y", "1")),
        );
        // f = X + 1 pulls back to (1 + x)/x; cleared by x and stripped this
        // is 1 + x.
        assert_eq!(birational_pullback(&map, &p("x + 1")).unwrap(), p("x + 1"));
        // f = X^2 picks up x^2 in the denominator only.
        assert_eq!(birational_pullback(&map, &p("x^2")).unwrap(), p("1"));
    }

    #[test]
    fn pullback_rejects_polynomial_denominators() {
        let map = BirationalMap::new(
            (rf("x", "1 - x"), rf("y", "1")),
            (rf("x", "1 + x"), rf("y", "1")),
        );
        assert_eq!(
            birational_pullback(&map, &p("x")),
            Err(FamilyError::DenominatorCollapse)
        );
    }

    #[test]
    #[should_panic(expected = "identity")]
    fn map_constructor_rejects_non_inverses() {
        BirationalMap::new((rf("x", "1"), rf("y", "1")), (rf("x + 1", "1"), rf("y", "1")));
    }

    #[test]
    fn pochhammer_and_factorial_agree() {
        assert_eq!(factorial(5), rat(120, 1));
        assert_eq!(pochhammer_rat(&rat_int(1), 5), factorial(5));
        assert_eq!(pochhammer_rat(&rat(-3, 1), 4), Rational::zero());
        assert_eq!(pochhammer_rat(&rat(1, 2), 2), rat(3, 4));
    }

    #[test]
    fn evaluator_from_pair_takes_the_invariant_ratio() {
        // w1 = e^s, w2 = e^{-s}; g0 = t, g1 = 1 gives
        // H = (e^s - t e^s)/(-e^{-s} - t e^{-s}) = -e^{2s} (1 - t)/(1 + t).
        let pair = FundamentalPair::new("exponential pair", |s: f64| {
            Some((s.exp(), s.exp(), (-s).exp(), -(-s).exp()))
        });
        let ev = FirstIntegralEvaluator::from_pair(
            "exponential ratio",
            pair,
            |x, y| (x, y),
            |_s, t| (t, 1.0),
        );
        let got = ev.eval(0.3, 0.5).unwrap();
        let want = -(0.6f64).exp() * 0.5 / 1.5;
        assert!((got - want).abs() < 1e-12 * want.abs());
        assert_eq!(ev.eval(0.0, -1.0), Err(EvalError::DivByZero));
    }
}
