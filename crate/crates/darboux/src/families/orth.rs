//! Quadratic systems attached to the classical second-order equations with
//! orthogonal-polynomial solutions. The leading coefficient Omega1 is one of
//! the normal forms 1, x, 1 - x^2 (Hermite, generalized Laguerre, Jacobi);
//! each member carries an invariant curve linear in y built from the
//! degree-n polynomial solution, and a first integral built from a
//! fundamental pair of confluent or Gauss hypergeometric solutions.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{rat, rat_int, rat_to_f64, Poly2, RatFn, Rational, Var};
use crate::construct::{polynomial_solutions, ChangeOfVar, LinearODE2, PlanarSystem};
use crate::special::{hyp1f1, hyp2f1, recip_gamma};

use super::{
    all_finite, primitive_positive, BirationalMap, EvalError, FamilyError,
    FirstIntegralEvaluator, FundamentalPair,
};

/// Which normal form the leading coefficient takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthKind {
    /// Omega1 = 1; closed forms need L = x.
    Hermite,
    /// Omega1 = x; closed forms need L = (x - alpha)/2.
    Laguerre,
    /// Omega1 = 1 - x^2; L = ((alpha + beta) x + alpha - beta)/2.
    Jacobi,
}

/// One member of the family: a leading coefficient Omega1 in normal form, a
/// linear polynomial L(x), and a real parameter n. The shift parameters are
/// derived from L where the normal form determines them.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthFamilySpec {
    omega1: Poly2,
    l: Poly2,
    n: Rational,
    kind: OrthKind,
    alpha: Option<Rational>,
    beta: Option<Rational>,
}

impl OrthFamilySpec {
    pub fn new(omega1: Poly2, l: Poly2, n: Rational) -> Result<Self, FamilyError> {
        let x = Poly2::var_x();
        let kind = if omega1 == Poly2::one() {
            OrthKind::Hermite
        } else if omega1 == x {
            OrthKind::Laguerre
        } else if omega1 == &Poly2::one() - &(&x * &x) {
            OrthKind::Jacobi
        } else {
            return Err(FamilyError::GuardViolation(
                "Omega1 must be one of the normal forms 1, x, 1 - x^2",
            ));
        };
        if l.degree_in(Var::Y) > 0 || l.degree() > 1 {
            return Err(FamilyError::GuardViolation(
                "L must be a polynomial in x alone of degree at most 1",
            ));
        }
        let lam = l.coeff(1, 0);
        let mu = l.coeff(0, 0);
        let (alpha, beta) = match kind {
            OrthKind::Hermite => (None, None),
            OrthKind::Laguerre => {
                if lam == rat(1, 2) {
                    (Some(mu * rat_int(-2)), None)
                } else {
                    (None, None)
                }
            }
            OrthKind::Jacobi => (Some(&lam + &mu), Some(&lam - &mu)),
        };
        Ok(OrthFamilySpec {
            omega1,
            l,
            n,
            kind,
            alpha,
            beta,
        })
    }

    pub fn omega1(&self) -> &Poly2 {
        &self.omega1
    }

    pub fn l(&self) -> &Poly2 {
        &self.l
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    pub fn kind(&self) -> OrthKind {
        self.kind
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref()
    }

    pub fn beta(&self) -> Option<&Rational> {
        self.beta.as_ref()
    }

    /// The attached equation Omega1 w'' + (Omega1' - 2L) w' + A0 w = 0 with
    /// A0 = (n/2)(4L' - (n + 1) Omega1'').
    pub fn ode(&self) -> LinearODE2 {
        let a2 = self.omega1.clone();
        let a1 = &self.omega1.partial_x() - &self.l.scale(&rat_int(2));
        let a0 = (&self.l.partial_x().scale(&rat_int(4))
            - &self
                .omega1
                .partial_x()
                .partial_x()
                .scale(&(&self.n + &Rational::one())))
            .scale(&(&self.n / &rat_int(2)));
        LinearODE2::new(a0, a1, a2).expect("Omega1 is nonzero")
    }

    /// The change g = (L - y, Omega1): solutions w yield invariants
    /// Omega1 w' - (L - y) w.
    pub fn change_of_var(&self) -> ChangeOfVar {
        let g0 = &self.l - &Poly2::var_y();
        ChangeOfVar::new(g0, self.omega1.clone()).expect("Omega1 is nonzero")
    }
}

/// The quadratic system attached to the data:
/// x' = Omega1, y' = (2n+1) L' Omega1 - (n(n+1)/2) Omega1 Omega1'' - L^2 + y^2.
pub fn orth_system(spec: &OrthFamilySpec) -> PlanarSystem {
    let o = &spec.omega1;
    let l = &spec.l;
    let n = &spec.n;
    let two_n_one = n * &rat_int(2) + Rational::one();
    let half_nn1 = n * &(n + &Rational::one()) / rat_int(2);
    let q = &(&(&(&l.partial_x() * o).scale(&two_n_one)
        - &(o * &o.partial_x().partial_x()).scale(&half_nn1))
        - &(l * l))
        + &(&Poly2::var_y() * &Poly2::var_y());
    PlanarSystem::new(o.clone(), q)
}

/// The degree-n polynomial solution of the attached equation, for integer
/// n >= 0, normalized to its primitive part.
pub fn orthpoly_solve(spec: &OrthFamilySpec) -> Result<Poly2, FamilyError> {
    if !spec.n.is_integer() || spec.n.is_negative() {
        return Err(FamilyError::GuardViolation(
            "the polynomial solution needs n to be a nonnegative integer",
        ));
    }
    let n = spec
        .n
        .to_integer()
        .to_u32()
        .ok_or(FamilyError::GuardViolation("n is far too large"))?;
    polynomial_solutions(&spec.ode(), n)
        .into_iter()
        .find(|w| w.degree() == n as i64)
        .map(|w| primitive_positive(&w))
        .ok_or(FamilyError::NoPolynomialSolution)
}

/// The invariant curve linear in y built from a polynomial solution p1:
/// f = p1 y + Omega1 p1' - L p1, with predicted cofactor y + L.
pub fn algcurve_linear_y(spec: &OrthFamilySpec, p1: &Poly2) -> (Poly2, Poly2) {
    let f = &(&(p1 * &Poly2::var_y()) + &(&spec.omega1 * &p1.partial_x())) - &(&spec.l * p1);
    let k = &Poly2::var_y() + &spec.l;
    (f, k)
}

/// The change x = 1/X, y = (1/2 - Y)/X carrying the x^2 leading-coefficient
/// chart onto the Laguerre normal form.
pub fn orth_x2_map() -> BirationalMap {
    let x = Poly2::var_x();
    let y = Poly2::var_y();
    BirationalMap::new(
        (
            RatFn::new(Poly2::one(), x.clone()),
            RatFn::new(&Poly2::constant(rat(1, 2)) - &y, x.clone()),
        ),
        (
            RatFn::new(Poly2::one(), x.clone()),
            RatFn::new(&x - &y.scale(&rat_int(2)), x.scale(&rat_int(2))),
        ),
    )
}

fn hermite_h_point(n: f64, x: f64, y: f64) -> Result<f64, EvalError> {
    let xx = x * x;
    let (fa, _) = hyp1f1((1.0 - n) / 2.0, 1.5, xx)?;
    let (fb, _) = hyp1f1((3.0 - n) / 2.0, 2.5, xx)?;
    let (fc, _) = hyp1f1(1.0 - n / 2.0, 1.5, xx)?;
    let (fd, _) = hyp1f1(-n / 2.0, 0.5, xx)?;
    let ga = recip_gamma(-n / 2.0);
    let gb = recip_gamma((1.0 - n) / 2.0);
    let block1 = 6.0 * (x * y - xx + 1.0) * fa.value - 4.0 * (n - 1.0) * xx * fb.value;
    let block2 = 3.0 * (2.0 * n * x * fc.value + (x - y) * fd.value);
    let den = -ga * block1 + gb * block2;
    if den == 0.0 {
        return Err(EvalError::DivByZero);
    }
    let h = (ga * block1 + gb * block2) / den;
    if h.is_finite() {
        Ok(h)
    } else {
        Err(EvalError::DomainError("solution ratio overflowed"))
    }
}

fn laguerre_h_point(n: f64, alpha: f64, x: f64, y: f64) -> Result<f64, EvalError> {
    if !(x > 0.0) {
        return Err(EvalError::DomainError(
            "the Laguerre closed form needs x > 0",
        ));
    }
    let (f1a, _) = hyp1f1(-n, alpha + 1.0, x)?;
    let (f1b, _) = hyp1f1(1.0 - n, alpha + 2.0, x)?;
    let (f2a, _) = hyp1f1(-alpha - n, 1.0 - alpha, x)?;
    let (f2b, _) = hyp1f1(1.0 - alpha - n, 2.0 - alpha, x)?;
    let h1 = (alpha + 1.0) * (2.0 * y - x + alpha) * f1a.value - 2.0 * n * x * f1b.value;
    let h2 = x.powf(-alpha)
        * ((1.0 - alpha) * (2.0 * y - x - alpha) * f2a.value
            - 2.0 * (alpha + n) * x * f2b.value);
    if h2 == 0.0 {
        return Err(EvalError::DivByZero);
    }
    let h = h1 / h2;
    if h.is_finite() {
        Ok(h)
    } else {
        Err(EvalError::DomainError("solution ratio overflowed"))
    }
}

fn jacobi_h_point(n: f64, alpha: f64, beta: f64, x: f64, y: f64) -> Result<f64, EvalError> {
    if !(x < 1.0) {
        return Err(EvalError::DomainError("the Jacobi closed form needs x < 1"));
    }
    let u = (1.0 - x) / 2.0;
    let (f1a, _) = hyp2f1(-n, 1.0 + alpha + beta + n, alpha + 1.0, u)?;
    let (f1b, _) = hyp2f1(1.0 - n, 2.0 + alpha + beta + n, alpha + 2.0, u)?;
    let (f2a, _) = hyp2f1(-alpha - n, 1.0 + beta + n, 1.0 - alpha, u)?;
    let (f2b, _) = hyp2f1(1.0 - alpha - n, 2.0 + beta + n, 2.0 - alpha, u)?;
    let h1 = (alpha + 1.0) * (2.0 * y - (alpha + beta) * x - alpha + beta) * f1a.value
        + n * (n + alpha + beta + 1.0) * (1.0 - x * x) * f1b.value;
    let h2 = (1.0 - x).powf(-alpha)
        * ((1.0 - alpha) * (2.0 * y + (alpha - beta) * x + alpha + beta) * f2a.value
            + (alpha + n) * (1.0 + beta + n) * (1.0 - x * x) * f2b.value);
    if h2 == 0.0 {
        return Err(EvalError::DivByZero);
    }
    let h = h1 / h2;
    if h.is_finite() {
        Ok(h)
    } else {
        Err(EvalError::DomainError("solution ratio overflowed"))
    }
}

/// The closed-form first integral of the attached system at a point. Needs
/// L in the matching normal form. At integer parameters where one
/// hypergeometric block drops out the value degenerates to a constant; the
/// evaluation still succeeds.
pub fn orthfam_h_eval(spec: &OrthFamilySpec, x: f64, y: f64) -> Result<f64, FamilyError> {
    let n = rat_to_f64(&spec.n);
    let h = match spec.kind {
        OrthKind::Hermite => {
            if spec.l != Poly2::var_x() {
                return Err(FamilyError::GuardViolation(
                    "the Hermite closed form needs L = x",
                ));
            }
            hermite_h_point(n, x, y)?
        }
        OrthKind::Laguerre => {
            let alpha = spec.alpha.as_ref().ok_or(FamilyError::GuardViolation(
                "the Laguerre closed form needs L = (x - alpha)/2",
            ))?;
            laguerre_h_point(n, rat_to_f64(alpha), x, y)?
        }
        OrthKind::Jacobi => {
            let alpha = rat_to_f64(spec.alpha.as_ref().expect("Jacobi always derives alpha"));
            let beta = rat_to_f64(spec.beta.as_ref().expect("Jacobi always derives beta"));
            jacobi_h_point(n, alpha, beta, x, y)?
        }
    };
    Ok(h)
}

/// Reject shift parameters where the displayed pair degenerates: at any
/// nonzero integer alpha one series sits at a pole, and at alpha = 0 the two
/// solutions coincide.
fn guard_integer_alpha(alpha: &Rational) -> Result<(), FamilyError> {
    if alpha.is_integer() {
        if alpha.is_zero() {
            Err(FamilyError::LinearDependence(
                "at alpha = 0 the two displayed solutions coincide",
            ))
        } else {
            Err(FamilyError::Pole(
                "a nonzero integer alpha puts a series lower parameter at a nonpositive integer",
            ))
        }
    } else {
        Ok(())
    }
}

/// Closed-form fundamental pair of the attached equation, as a numeric
/// evaluator returning (w1, w1', w2, w2').
pub fn orth_fundamental_pair(spec: &OrthFamilySpec) -> Result<FundamentalPair, FamilyError> {
    let n = rat_to_f64(&spec.n);
    match spec.kind {
        OrthKind::Hermite => {
            if spec.l != Poly2::var_x() {
                return Err(FamilyError::GuardViolation(
                    "the Hermite pair needs L = x",
                ));
            }
            if spec.n.is_integer() && !spec.n.is_negative() {
                return Err(FamilyError::LinearDependence(
                    "at a nonnegative integer n one gamma weight vanishes and the pair collapses",
                ));
            }
            Ok(FundamentalPair::new(
                format!("Hermite-equation pair, n = {n}"),
                move |s: f64| {
                    let ss = s * s;
                    let (fe, fed) = hyp1f1(-n / 2.0, 0.5, ss).ok()?;
                    let (fo, fod) = hyp1f1((1.0 - n) / 2.0, 1.5, ss).ok()?;
                    let ge = recip_gamma((1.0 - n) / 2.0);
                    let go = recip_gamma(-n / 2.0);
                    let even = ge * fe.value;
                    let even_d = ge * fed.value * 2.0 * s;
                    let odd = 2.0 * go * s * fo.value;
                    let odd_d = 2.0 * go * (fo.value + 2.0 * ss * fod.value);
                    let vals = (even - odd, even_d - odd_d, even + odd, even_d + odd_d);
                    all_finite(vals).then_some(vals)
                },
            ))
        }
        OrthKind::Laguerre => {
            let alpha_rat = spec.alpha.clone().ok_or(FamilyError::GuardViolation(
                "the Laguerre pair needs L = (x - alpha)/2",
            ))?;
            guard_integer_alpha(&alpha_rat)?;
            let alpha = rat_to_f64(&alpha_rat);
            Ok(FundamentalPair::new(
                format!("Laguerre-equation pair, n = {n}, alpha = {alpha}"),
                move |s: f64| {
                    if !(s > 0.0) {
                        return None;
                    }
                    let (f1, f1d) = hyp1f1(-n, alpha + 1.0, s).ok()?;
                    let (f2, f2d) = hyp1f1(-alpha - n, 1.0 - alpha, s).ok()?;
                    let sp = s.powf(-alpha);
                    let vals = (
                        f1.value,
                        f1d.value,
                        sp * f2.value,
                        sp * (f2d.value - alpha / s * f2.value),
                    );
                    all_finite(vals).then_some(vals)
                },
            ))
        }
        OrthKind::Jacobi => {
            let alpha_rat = spec.alpha.clone().expect("Jacobi always derives alpha");
            guard_integer_alpha(&alpha_rat)?;
            let alpha = rat_to_f64(&alpha_rat);
            let beta = rat_to_f64(spec.beta.as_ref().expect("Jacobi always derives beta"));
            Ok(FundamentalPair::new(
                format!("Jacobi-equation pair, n = {n}, alpha = {alpha}, beta = {beta}"),
                move |s: f64| {
                    if !(s < 1.0) {
                        return None;
                    }
                    let u = (1.0 - s) / 2.0;
                    let (f1, f1d) = hyp2f1(-n, 1.0 + alpha + beta + n, alpha + 1.0, u).ok()?;
                    let (f2, f2d) = hyp2f1(-alpha - n, 1.0 + beta + n, 1.0 - alpha, u).ok()?;
                    let sp = (1.0 - s).powf(-alpha);
                    let vals = (
                        f1.value,
                        -0.5 * f1d.value,
                        sp * f2.value,
                        sp * (alpha / (1.0 - s) * f2.value - 0.5 * f2d.value),
                    );
                    all_finite(vals).then_some(vals)
                },
            ))
        }
    }
}

/// First integral as the ratio of the two invariants Omega1 w' - (L - y) w
/// over the closed-form pair.
pub fn orth_pair_evaluator(spec: &OrthFamilySpec) -> Result<FirstIntegralEvaluator, FamilyError> {
    let pair = orth_fundamental_pair(spec)?;
    let g0 = &spec.l - &Poly2::var_y();
    let g1 = spec.omega1.clone();
    let label = format!("invariant ratio over the {}", pair.label());
    Ok(FirstIntegralEvaluator::from_pair(
        label,
        pair,
        |x, y| (x, y),
        move |s, t| (g0.eval_f64(s, t), g1.eval_f64(s, t)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_second_order;
    use crate::dynamics::{abel_check, drift, integrate};
    use crate::exprparse::parse_poly;
    use crate::families::birational_pullback;
    use crate::verify::invariant_poly_check;

    fn p(s: &str) -> Poly2 {
        parse_poly(s).expect("test polynomial parses")
    }

    fn hermite(n: Rational) -> OrthFamilySpec {
        OrthFamilySpec::new(Poly2::one(), p("x"), n).unwrap()
    }

    fn laguerre(n: Rational, alpha: Rational) -> OrthFamilySpec {
        let l = &p("x").scale(&rat(1, 2)) - &Poly2::constant(alpha / rat_int(2));
        OrthFamilySpec::new(p("x"), l, n).unwrap()
    }

    fn jacobi(n: Rational, alpha: Rational, beta: Rational) -> OrthFamilySpec {
        let lam = (&alpha + &beta) / rat_int(2);
        let mu = (&alpha - &beta) / rat_int(2);
        let l = &Poly2::var_x().scale(&lam) + &Poly2::constant(mu);
        OrthFamilySpec::new(&Poly2::one() - &p("x^2"), l, n).unwrap()
    }

    #[test]
    fn constructor_classifies_normal_forms() {
        assert_eq!(hermite(rat_int(1)).kind(), OrthKind::Hermite);
        assert_eq!(laguerre(rat_int(2), rat(1, 2)).kind(), OrthKind::Laguerre);
        let j = jacobi(rat_int(1), rat(1, 2), rat_int(1));
        assert_eq!(j.kind(), OrthKind::Jacobi);
        assert_eq!(j.alpha(), Some(&rat(1, 2)));
        assert_eq!(j.beta(), Some(&rat_int(1)));
        assert!(matches!(
            OrthFamilySpec::new(p("2*x"), p("x"), rat_int(1)),
            Err(FamilyError::GuardViolation(_))
        ));
        assert!(matches!(
            OrthFamilySpec::new(Poly2::one(), p("y"), rat_int(1)),
            Err(FamilyError::GuardViolation(_))
        ));
        assert!(matches!(
            OrthFamilySpec::new(Poly2::one(), p("x^2"), rat_int(1)),
            Err(FamilyError::GuardViolation(_))
        ));
    }

    #[test]
    fn laguerre_alpha_derives_only_from_the_normal_form() {
        assert_eq!(laguerre(rat_int(1), rat_int(3)).alpha(), Some(&rat_int(3)));
        let off_form = OrthFamilySpec::new(p("x"), p("x"), rat_int(1)).unwrap();
        assert_eq!(off_form.alpha(), None);
    }

    #[test]
    fn builder_route_reproduces_the_direct_system() {
        for spec in [
            hermite(rat_int(1)),
            laguerre(rat_int(2), rat(1, 2)),
            jacobi(rat_int(1), rat(1, 2), rat_int(1)),
        ] {
            let built = build_second_order(&spec.ode(), &spec.change_of_var()).unwrap();
            let o = spec.omega1();
            let c = built
                .p()
                .divexact(&(o * o))
                .expect("built P is a constant multiple of Omega1^2");
            assert!(c.is_constant());
            let reduced = built
                .divide_time(&o.scale(&c.coeff(0, 0)))
                .expect("Omega1 divides both components");
            let direct = orth_system(&spec);
            assert_eq!(reduced.p(), direct.p());
            assert_eq!(reduced.q(), direct.q());
        }
    }

    #[test]
    fn hermite_system_matches_the_classical_example() {
        let sys = orth_system(&hermite(rat_int(1)));
        assert_eq!(sys.p(), &p("1"));
        assert_eq!(sys.q(), &p("y^2 - x^2 + 3"));
    }

    #[test]
    fn orthpoly_matches_classical_polynomials() {
        assert_eq!(orthpoly_solve(&hermite(rat_int(3))).unwrap(), p("2*x^3 - 3*x"));
        assert_eq!(
            orthpoly_solve(&laguerre(rat_int(2), rat_int(0))).unwrap(),
            p("x^2 - 4*x + 2")
        );
        assert_eq!(
            orthpoly_solve(&jacobi(rat_int(2), rat_int(0), rat_int(0))).unwrap(),
            p("3*x^2 - 1")
        );
    }

    #[test]
    fn orthpoly_rejects_non_integer_n_and_reports_missing_solutions() {
        assert!(matches!(
            orthpoly_solve(&hermite(rat(1, 2))),
            Err(FamilyError::GuardViolation(_))
        ));
        let degenerate = jacobi(rat_int(1), rat_int(0), rat_int(-2));
        assert_eq!(
            orthpoly_solve(&degenerate),
            Err(FamilyError::NoPolynomialSolution)
        );
    }

    #[test]
    fn algcurve_is_invariant_with_the_predicted_cofactor() {
        for spec in [
            hermite(rat_int(1)),
            hermite(rat_int(3)),
            laguerre(rat_int(2), rat(1, 2)),
            jacobi(rat_int(2), rat_int(0), rat_int(0)),
        ] {
            let p1 = orthpoly_solve(&spec).unwrap();
            let (f, k) = algcurve_linear_y(&spec, &p1);
            let sys = orth_system(&spec);
            let cert = invariant_poly_check(&sys, &f);
            assert!(cert.passed(), "curve fails for {:?}", spec.kind());
            assert_eq!(cert.cofactor, k);
            assert_eq!(k, &Poly2::var_y() + spec.l());
        }
    }

    #[test]
    fn hermite_curve_n1_is_the_classical_parabola() {
        let spec = hermite(rat_int(1));
        let p1 = orthpoly_solve(&spec).unwrap();
        assert_eq!(p1, p("x"));
        let (f, k) = algcurve_linear_y(&spec, &p1);
        assert_eq!(f, p("x*y - x^2 + 1"));
        assert_eq!(k, p("y + x"));
    }

    #[test]
    fn closed_form_collapses_to_a_constant_at_integer_n() {
        let spec = hermite(rat_int(1));
        for (x, y) in [(0.3, 0.7), (-1.1, 0.4), (0.9, -2.0)] {
            let h = orthfam_h_eval(&spec, x, y).unwrap();
            assert!((h + 1.0).abs() < 1e-12, "H = {h} at ({x}, {y})");
        }
    }

    #[test]
    fn closed_form_is_constant_along_orbits_for_half_integer_n() {
        // Seed chosen away from the finite-time blow-up of y' = y^2 - x^2 + 2:
        // orbits through small |y| near x = 0 escape before t = 2.
        let spec = hermite(rat(1, 2));
        let sys = orth_system(&spec);
        assert_eq!(sys.q(), &p("y^2 - x^2 + 2"));
        let traj = integrate(&sys, -3.0, -3.0, 2.0, 1e-10).unwrap();
        let report = drift(|x, y| orthfam_h_eval(&spec, x, y).ok(), &traj).unwrap();
        assert!(report.max_rel_drift < 1e-6, "drift {}", report.max_rel_drift);
        assert!(report.skipped * 10 < traj.samples.len());
    }

    #[test]
    fn laguerre_closed_form_is_constant_along_orbits() {
        // Orbit on the branch y ~ -x/2 where y' = y^2 + ... stays bounded.
        let spec = laguerre(rat(1, 3), rat(1, 2));
        let sys = orth_system(&spec);
        let traj = integrate(&sys, 5.0, -2.0, 1.0, 1e-10).unwrap();
        let report = drift(|x, y| orthfam_h_eval(&spec, x, y).ok(), &traj).unwrap();
        assert!(report.max_rel_drift < 1e-6, "drift {}", report.max_rel_drift);
    }

    #[test]
    fn jacobi_closed_form_is_constant_along_orbits() {
        let spec = jacobi(rat(1, 3), rat(1, 2), rat(1, 2));
        let sys = orth_system(&spec);
        let traj = integrate(&sys, 0.0, 0.3, 1.0, 1e-10).unwrap();
        let report = drift(|x, y| orthfam_h_eval(&spec, x, y).ok(), &traj).unwrap();
        assert!(report.max_rel_drift < 1e-6, "drift {}", report.max_rel_drift);
    }

    #[test]
    fn pair_rejects_degenerate_parameters() {
        assert!(matches!(
            orth_fundamental_pair(&hermite(rat_int(2))),
            Err(FamilyError::LinearDependence(_))
        ));
        assert!(matches!(
            orth_fundamental_pair(&laguerre(rat(1, 3), rat_int(0))),
            Err(FamilyError::LinearDependence(_))
        ));
        assert!(matches!(
            orth_fundamental_pair(&laguerre(rat(1, 3), rat_int(3))),
            Err(FamilyError::Pole(_))
        ));
        assert!(matches!(
            orth_fundamental_pair(&jacobi(rat(1, 3), rat_int(-1), rat(1, 2))),
            Err(FamilyError::Pole(_))
        ));
        assert!(orth_fundamental_pair(&hermite(rat_int(-2))).is_ok());
    }

    #[test]
    fn pair_satisfies_the_wronskian_identity() {
        let hermite_pair = orth_fundamental_pair(&hermite(rat(1, 2))).unwrap();
        let rel = abel_check(
            &hermite_pair.as_fn(),
            &hermite(rat(1, 2)).ode(),
            &[-1.5, -0.75, 0.0, 0.75, 1.5],
        )
        .unwrap();
        assert!(rel < 1e-7, "Hermite Wronskian relative error {rel}");

        let spec = laguerre(rat(1, 3), rat(1, 2));
        let rel = abel_check(
            &orth_fundamental_pair(&spec).unwrap().as_fn(),
            &spec.ode(),
            &[0.5, 1.0, 2.0, 3.5],
        )
        .unwrap();
        assert!(rel < 1e-7, "Laguerre Wronskian relative error {rel}");

        let spec = jacobi(rat(1, 3), rat(1, 2), rat(1, 2));
        let rel = abel_check(
            &orth_fundamental_pair(&spec).unwrap().as_fn(),
            &spec.ode(),
            &[-0.6, -0.2, 0.2, 0.6],
        )
        .unwrap();
        assert!(rel < 1e-7, "Jacobi Wronskian relative error {rel}");
    }

    #[test]
    fn closed_form_and_pair_ratio_agree_up_to_a_constant() {
        let cases: Vec<(OrthFamilySpec, Vec<(f64, f64)>)> = vec![
            (
                hermite(rat(1, 2)),
                (0..10).map(|i| (-1.2 + 0.27 * i as f64, 0.4 + 0.11 * i as f64)).collect(),
            ),
            (
                laguerre(rat(1, 3), rat(1, 2)),
                (0..10).map(|i| (0.5 + 0.3 * i as f64, -0.8 + 0.19 * i as f64)).collect(),
            ),
            (
                jacobi(rat(1, 3), rat(1, 2), rat(1, 2)),
                (0..10).map(|i| (-0.7 + 0.14 * i as f64, 0.3 + 0.12 * i as f64)).collect(),
            ),
        ];
        for (spec, points) in cases {
            let ev = orth_pair_evaluator(&spec).unwrap();
            let mut ratio0 = None;
            for (x, y) in points {
                let disp = orthfam_h_eval(&spec, x, y).unwrap();
                let pair = ev.eval(x, y).unwrap();
                let r = disp / pair;
                match ratio0 {
                    None => ratio0 = Some(r),
                    Some(r0) => assert!(
                        (r - r0).abs() <= 1e-9 * r0.abs(),
                        "{:?}: ratio drifts from {r0} to {r} at ({x}, {y})",
                        spec.kind()
                    ),
                }
            }
        }
    }

    #[test]
    fn x2_chart_curve_pulls_back_through_the_map() {
        // In the Laguerre chart with n = 1 and alpha = 1 the degree-1
        // solution gives the curve 2 X Y - 4 Y - X^2 + 5 X - 2 (times 1/2).
        // Under x = 1/X, y = (1/2 - Y)/X this becomes an invariant conic of
        // x' = x^2, y' = y^2 + 2x - 1/4.
        let spec = laguerre(rat_int(1), rat_int(1));
        let p1 = orthpoly_solve(&spec).unwrap();
        assert_eq!(p1, p("x - 2"));
        let (curve, _) = algcurve_linear_y(&spec, &p1);
        assert_eq!(curve.scale(&rat_int(2)), p("2*x*y - 4*y - x^2 + 5*x - 2"));

        let pulled = birational_pullback(&orth_x2_map(), &curve).unwrap();
        assert_eq!(pulled, p("4*x^2 - 4*x*y - 6*x + 2*y + 1"));

        let sys = PlanarSystem::new(p("x^2"), p("y^2 + 2*x - 1/4"));
        let cert = invariant_poly_check(&sys, &pulled);
        assert!(cert.passed());
        assert_eq!(cert.cofactor, p("2*x + y - 1/2"));
    }
}
