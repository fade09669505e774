//! Trajectory integration and conservation measurement: adaptive Runge-Kutta
//! for the planar flow, relative drift of a first integral along samples, and
//! a finite-difference Wronskian identity check for solution pairs.

use thiserror::Error;

use crate::construct::{LinearODE2, PlanarSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynError {
    #[error("tolerance {0:e} outside [1e-13, 1e-3]")]
    BadTolerance(f64),
    #[error("time horizon must be finite and nonzero")]
    BadHorizon,
    #[error("initial point is a singular point of the system")]
    SingularStart,
    #[error("trajectory norm exceeded 1e8 at t = {0}")]
    BlowUp(f64),
    #[error("step size collapsed below 1e-14 at t = {0}")]
    StepCollapse(f64),
    #[error("first integral is undefined at the initial sample")]
    UndefinedAtStart,
    #[error("no sample after the first could be evaluated")]
    AllSkipped,
    #[error("solution pair or coefficients undefined at grid point {0}")]
    DomainError(f64),
    #[error("Wronskian vanishes on the grid: the pair is linearly dependent")]
    DependentPair,
}

/// Sampled solution of dx/dt = P, dy/dt = Q. Sample times are strictly
/// monotone in integration direction and every coordinate is finite.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<(f64, f64, f64)>,
    pub steps: u64,
    pub rejected: u64,
    pub tol: f64,
}

/// Conservation measurement of a scalar function along a trajectory.
#[derive(Debug, Clone)]
pub struct DriftReport {
    pub h0: f64,
    pub max_rel_drift: f64,
    pub samples_evaluated: usize,
    pub skipped: usize,
}

// Dormand-Prince 5(4) coefficients; the fifth-order weights are row a7 and
// E holds b5 - b4 for the embedded error estimate.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const ERR: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

const BLOWUP_NORM: f64 = 1e8;
const MIN_STEP: f64 = 1e-14;

/// Integrate the planar system from (x0, y0) over [0, t1] (t1 may be
/// negative) with local error per step at most `tol`, sampling on the
/// uniform grid of 1000 subintervals.
pub fn integrate(
    sys: &PlanarSystem,
    x0: f64,
    y0: f64,
    t1: f64,
    tol: f64,
) -> Result<Trajectory, DynError> {
    if !(1e-13..=1e-3).contains(&tol) {
        return Err(DynError::BadTolerance(tol));
    }
    if !t1.is_finite() || t1 == 0.0 {
        return Err(DynError::BadHorizon);
    }
    let f = |x: f64, y: f64| (sys.p().eval_f64(x, y), sys.q().eval_f64(x, y));
    let (p0, q0) = f(x0, y0);
    if p0 == 0.0 && q0 == 0.0 {
        return Err(DynError::SingularStart);
    }

    let dt = t1 / 1000.0;
    let mut samples = Vec::with_capacity(1001);
    samples.push((0.0, x0, y0));
    let (mut t, mut x, mut y) = (0.0f64, x0, y0);
    let mut h = dt;
    let mut steps = 0u64;
    let mut rejected = 0u64;

    for m in 1..=1000u32 {
        let target = dt * f64::from(m);
        while (target - t) * t1.signum() > 0.0 {
            if h.abs() < MIN_STEP {
                return Err(DynError::StepCollapse(t));
            }
            let mut hs = h;
            let mut capped = false;
            if (t + hs - target) * t1.signum() >= 0.0 {
                hs = target - t;
                capped = true;
            }

            let k1 = f(x, y);
            let k2 = f(x + hs * A2[0] * k1.0, y + hs * A2[0] * k1.1);
            let k3 = f(
                x + hs * (A3[0] * k1.0 + A3[1] * k2.0),
                y + hs * (A3[0] * k1.1 + A3[1] * k2.1),
            );
            let k4 = f(
                x + hs * (A4[0] * k1.0 + A4[1] * k2.0 + A4[2] * k3.0),
                y + hs * (A4[0] * k1.1 + A4[1] * k2.1 + A4[2] * k3.1),
            );
            let k5 = f(
                x + hs * (A5[0] * k1.0 + A5[1] * k2.0 + A5[2] * k3.0 + A5[3] * k4.0),
                y + hs * (A5[0] * k1.1 + A5[1] * k2.1 + A5[2] * k3.1 + A5[3] * k4.1),
            );
            let k6 = f(
                x + hs * (A6[0] * k1.0 + A6[1] * k2.0 + A6[2] * k3.0 + A6[3] * k4.0 + A6[4] * k5.0),
                y + hs * (A6[0] * k1.1 + A6[1] * k2.1 + A6[2] * k3.1 + A6[3] * k4.1 + A6[4] * k5.1),
            );
            let xn = x + hs * (B5[0] * k1.0 + B5[2] * k3.0 + B5[3] * k4.0 + B5[4] * k5.0 + B5[5] * k6.0);
            let yn = y + hs * (B5[0] * k1.1 + B5[2] * k3.1 + B5[3] * k4.1 + B5[4] * k5.1 + B5[5] * k6.1);
            let k7 = f(xn, yn);

            let ks = [k1, k2, k3, k4, k5, k6, k7];
            let (mut ex, mut ey) = (0.0, 0.0);
            for (w, k) in ERR.iter().zip(ks.iter()) {
                ex += w * k.0;
                ey += w * k.1;
            }
            ex *= hs;
            ey *= hs;
            let scx = tol + tol * x.abs().max(xn.abs());
            let scy = tol + tol * y.abs().max(yn.abs());
            let err = (0.5 * ((ex / scx).powi(2) + (ey / scy).powi(2))).sqrt();

            if !xn.is_finite() || !yn.is_finite() {
                return Err(DynError::BlowUp(t));
            }
            if err <= 1.0 {
                t = if capped { target } else { t + hs };
                x = xn;
                y = yn;
                steps += 1;
                if x.hypot(y) > BLOWUP_NORM {
                    return Err(DynError::BlowUp(t));
                }
                let grow = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                if capped {
                    // a grid-landing step is artificially short; keep the
                    // controller's step unless the error forces it down
                    h = h.abs().max((hs * grow).abs()).copysign(dt);
                } else {
                    h = hs * grow;
                }
            } else {
                rejected += 1;
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.2, 0.9);
            }
        }
        samples.push((target, x, y));
    }

    Ok(Trajectory {
        samples,
        steps,
        rejected,
        tol,
    })
}

/// Maximum relative drift of `h` along the trajectory: max over samples of
/// |H - H0| / max(|H0|, 1e-300). Samples where `h` returns None count as
/// skipped; the measurement fails only if nothing after the first sample is
/// evaluable.
pub fn drift(
    h: impl Fn(f64, f64) -> Option<f64>,
    traj: &Trajectory,
) -> Result<DriftReport, DynError> {
    let (_, x0, y0) = traj.samples[0];
    let h0 = h(x0, y0).filter(|v| v.is_finite()).ok_or(DynError::UndefinedAtStart)?;
    let scale = h0.abs().max(1e-300);
    let mut max_rel = 0.0f64;
    let mut evaluated = 1usize;
    let mut skipped = 0usize;
    for &(_, x, y) in &traj.samples[1..] {
        match h(x, y).filter(|v| v.is_finite()) {
            Some(v) => {
                evaluated += 1;
                max_rel = max_rel.max((v - h0).abs() / scale);
            }
            None => skipped += 1,
        }
    }
    if evaluated == 1 && !traj.samples[1..].is_empty() {
        return Err(DynError::AllSkipped);
    }
    Ok(DriftReport {
        h0,
        max_rel_drift: max_rel,
        samples_evaluated: evaluated,
        skipped,
    })
}

/// A pair of scalar solutions of a second-order ODE, evaluable with first
/// derivatives: eval returns (w1, w1', w2, w2') or None outside the domain.
pub trait SolutionPair {
    fn eval(&self, x: f64) -> Option<(f64, f64, f64, f64)>;
}

impl<F: Fn(f64) -> Option<(f64, f64, f64, f64)>> SolutionPair for F {
    fn eval(&self, x: f64) -> Option<(f64, f64, f64, f64)> {
        self(x)
    }
}

/// Check the Wronskian identity A2 W' + A1 W = 0 on a grid, with
/// W = w1 w2' - w2 w1' and W' by central differences (step 1e-4 scaled by
/// |x|). Returns the maximum residual relative to the size of the terms
/// involved. Fails with DependentPair when W is negligible across the whole
/// grid, since the identity holds vacuously for dependent pairs.
pub fn abel_check(
    pair: &impl SolutionPair,
    ode: &LinearODE2,
    grid: &[f64],
) -> Result<f64, DynError> {
    assert!(!grid.is_empty(), "empty grid");
    let mut residuals = Vec::with_capacity(grid.len());
    let mut scale = 0.0f64;
    let mut w_max = 0.0f64;
    let mut prod_max = 0.0f64;
    for &x in grid {
        let a2 = ode.a2().eval_f64(x, 0.0);
        let a1 = ode.a1().eval_f64(x, 0.0);
        if a2 == 0.0 {
            return Err(DynError::DomainError(x));
        }
        let h = 1e-4 * x.abs().max(1.0);
        let wr = |x: f64| -> Option<(f64, f64)> {
            let (w1, d1, w2, d2) = pair.eval(x)?;
            Some((w1 * d2 - w2 * d1, w1.abs() * d2.abs() + w2.abs() * d1.abs()))
        };
        let (wm, _) = wr(x - h).ok_or(DynError::DomainError(x))?;
        let (w0, pr) = wr(x).ok_or(DynError::DomainError(x))?;
        let (wp, _) = wr(x + h).ok_or(DynError::DomainError(x))?;
        let wd = (wp - wm) / (2.0 * h);
        residuals.push((a2 * wd + a1 * w0).abs());
        scale = scale.max((a2 * wd).abs()).max((a1 * w0).abs()).max(w0.abs());
        w_max = w_max.max(w0.abs());
        prod_max = prod_max.max(pr);
    }
    if w_max < 1e-12 * prod_max.max(1e-300) {
        return Err(DynError::DependentPair);
    }
    let scale = scale.max(1e-300);
    Ok(residuals.into_iter().fold(0.0, f64::max) / scale)
}
