//! Command-line front end: construct planar systems from linear ODEs, check
//! invariance certificates, emit the built-in families, integrate orbits, and
//! re-verify previously written reports. Every command prints one JSON report
//! to stdout; reports are byte-identical for identical invocations. Exit code
//! 0 means every certificate passed and every drift threshold was met, 1 means
//! a check failed, 2 means the invocation or its data was unusable.

mod json;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use sha2::{Digest, Sha256};

use darboux::algebra::{rat_from_str, rat_int, rat_to_f64, Rational, Var};
use darboux::construct::{
    build_first_order, build_second_order, iif_divergence_check, predicted_cofactor_1st,
    predicted_cofactor_2nd, q_object_2nd, ChangeOfVar, DarbouxLogDeriv, ExactVerdict, LinearODE1,
    LinearODE2, PlanarSystem,
};
use darboux::dynamics::{drift, integrate, DriftReport, Trajectory};
use darboux::exprparse::{format_poly, parse_poly};
use darboux::families::{
    algcurve_linear_y, center, lv, newfam, orth_system, orthfam_h_eval, orthpoly_solve,
    OrthFamilySpec,
};
use darboux::verify::{
    invariant_darboux_check, invariant_poly_check, quadratic_in_v_irreducibility, CertCandidate,
    InvariantCertificate, IrreducibilityOutcome, Verdict,
};
use darboux::{Poly2, RatFn};

use json::{fmt_f64, Json};

#[derive(Parser)]
#[command(
    name = "darboux",
    version,
    about = "Construct, certify, and simulate rational planar systems built from linear ODEs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a planar system from a linear ODE and a change of variable
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Check an invariance certificate for explicit data
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Emit a built-in family with its certificates and first integral
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Integrate an explicit system and export the sampled trajectory
    Simulate(SimulateArgs),
    /// Operate on previously written reports
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// From A2 w'' + A1 w' + A0 w = 0 and g = g0/g1
    SecondOrder(SecondOrderArgs),
    /// From w' + (A0/A1) h w = 0 data and g = g0/g1
    FirstOrder(FirstOrderArgs),
}

#[derive(Args)]
struct SecondOrderArgs {
    #[arg(long, allow_hyphen_values = true)]
    a0: String,
    #[arg(long, allow_hyphen_values = true)]
    a1: String,
    #[arg(long, allow_hyphen_values = true)]
    a2: String,
    #[arg(long, allow_hyphen_values = true)]
    g0: String,
    #[arg(long, allow_hyphen_values = true)]
    g1: String,
    /// Optional polynomial solution w of the ODE; adds the certificate for
    /// the curve g1 w' - g0 w = 0
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
}

#[derive(Args)]
struct FirstOrderArgs {
    #[arg(long, allow_hyphen_values = true)]
    a0: String,
    #[arg(long, allow_hyphen_values = true)]
    a1: String,
    #[arg(long, allow_hyphen_values = true)]
    h0: String,
    #[arg(long, allow_hyphen_values = true)]
    h1: String,
    #[arg(long, allow_hyphen_values = true)]
    g0: String,
    #[arg(long, allow_hyphen_values = true)]
    g1: String,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Polynomial curve candidate f = 0
    Invariant(VerifyInvariantArgs),
    /// Log-derivative object with rational components
    Darboux(VerifyDarbouxArgs),
    /// Inverse-integrating-factor cofactor against the divergence
    Iif(VerifyIifArgs),
}

#[derive(Args)]
struct VerifyInvariantArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
}

#[derive(Args)]
struct VerifyDarbouxArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    lx_num: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    lx_den: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    ly_num: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    ly_den: String,
}

#[derive(Args)]
struct VerifyIifArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    /// Claimed cofactor of the inverse integrating factor
    #[arg(long, allow_hyphen_values = true)]
    kv: String,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Riccati extension of an orthogonal-polynomial equation
    Orth(OrthArgs),
    /// Quadratic Lotka-Volterra system with a Bessel first integral
    Lv(LvArgs),
    /// Quadratic family with an invariant line and parabola
    New(NewArgs),
    /// Three-parameter family of centers with an invariant conic
    Center(CenterArgs),
}

#[derive(Args)]
struct OrthArgs {
    /// Leading coefficient Omega1 (one of 1, x, 1 - x^2)
    #[arg(long, allow_hyphen_values = true)]
    omega1: String,
    /// Linear polynomial L(x)
    #[arg(long, allow_hyphen_values = true)]
    l: String,
    /// Degree parameter n (rational)
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    /// Skip the symbolic branch even when n is a natural number
    #[arg(long)]
    float: bool,
    #[command(flatten)]
    sim: SimFlags,
}

#[derive(Args)]
struct LvArgs {
    /// Parameter ell (rational, not 1/2)
    #[arg(long, allow_hyphen_values = true)]
    ell: String,
    /// Skip the symbolic branch even when ell is a natural number
    #[arg(long)]
    float: bool,
    #[command(flatten)]
    sim: SimFlags,
}

#[derive(Args)]
struct NewArgs {
    /// Parameter a (rational, nonzero)
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Parameter ell (rational, not 1/2)
    #[arg(long, allow_hyphen_values = true)]
    ell: String,
    /// Skip the symbolic branch even when ell is a natural number
    #[arg(long)]
    float: bool,
    #[command(flatten)]
    sim: SimFlags,
}

#[derive(Args)]
struct CenterArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, allow_hyphen_values = true)]
    d: String,
    #[command(flatten)]
    sim: SimFlags,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long, allow_hyphen_values = true)]
    y0: f64,
    #[arg(long, allow_hyphen_values = true)]
    t1: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Write the sampled trajectory as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Re-run every symbolic check recorded in a report file
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args, Clone)]
struct SimFlags {
    /// Integrate an orbit and measure drift of the first integral
    #[arg(long)]
    simulate: bool,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    /// Integrator tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Largest acceptable relative drift of the first integral
    #[arg(long, default_value_t = 1e-6)]
    max_drift: f64,
    /// Write the sampled trajectory (with H where defined) as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Domain or usage failure: message on stderr, exit code 2.
struct CliError(String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

struct Outcome {
    report: Json,
    ok: bool,
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(outcome) => {
            println!("{}", outcome.report.render());
            u8::from(!outcome.ok)
        }
        Err(CliError(msg)) => {
            eprintln!("darboux: {msg}");
            2
        }
    };
    eprintln!("wall time: {} ms", start.elapsed().as_millis());
    ExitCode::from(code)
}

fn dispatch(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Construct(ConstructCmd::SecondOrder(args)) => construct_second(args),
        Command::Construct(ConstructCmd::FirstOrder(args)) => construct_first(args),
        Command::Verify(VerifyCmd::Invariant(args)) => verify_invariant(args),
        Command::Verify(VerifyCmd::Darboux(args)) => verify_darboux(args),
        Command::Verify(VerifyCmd::Iif(args)) => verify_iif(args),
        Command::Family(FamilyCmd::Orth(args)) => family_orth(args),
        Command::Family(FamilyCmd::Lv(args)) => family_lv(args),
        Command::Family(FamilyCmd::New(args)) => family_new(args),
        Command::Family(FamilyCmd::Center(args)) => family_center(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Report(ReportCmd::Validate(args)) => validate::validate_cmd(&args.file),
    }
}

// ---------------------------------------------------------------------------
// report plumbing

fn sha_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Ordered echo of the parsed inputs; hashed into the report so a reader can
/// tell two reports apart without re-reading flag values.
struct Inputs(Vec<(&'static str, String)>);

impl Inputs {
    fn new() -> Self {
        Inputs(Vec::new())
    }

    fn add(&mut self, name: &'static str, value: impl Into<String>) {
        self.0.push((name, value.into()));
    }

    fn hashes(&self) -> Json {
        Json::Obj(
            self.0
                .iter()
                .map(|(name, value)| (*name, Json::str(sha_hex(value))))
                .collect(),
        )
    }
}

fn report(
    command: &str,
    inputs: &Inputs,
    system: Option<&PlanarSystem>,
    extras: Vec<(&'static str, Json)>,
    certificates: Vec<Json>,
    drift_block: Json,
) -> Json {
    let mut fields = vec![
        ("version", Json::str(env!("CARGO_PKG_VERSION"))),
        ("command", Json::str(command)),
        ("input_hashes", inputs.hashes()),
        (
            "system",
            system.map(system_json).unwrap_or(Json::Null),
        ),
    ];
    fields.extend(extras);
    fields.push(("certificates", Json::Arr(certificates)));
    fields.push(("drift", drift_block));
    Json::Obj(fields)
}

fn system_json(sys: &PlanarSystem) -> Json {
    Json::Obj(vec![
        ("P", Json::str(format_poly(sys.p()))),
        ("Q", Json::str(format_poly(sys.q()))),
        ("degree", Json::Int(sys.degree())),
    ])
}

fn ratfn_json(rf: &RatFn) -> Json {
    Json::Obj(vec![
        ("num", Json::str(format_poly(&rf.num))),
        ("den", Json::str(format_poly(&rf.den))),
    ])
}

fn logderiv_json(l: &DarbouxLogDeriv) -> Json {
    Json::Obj(vec![("lx", ratfn_json(&l.lx)), ("ly", ratfn_json(&l.ly))])
}

fn verdict_str(v: &Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
    }
}

fn cert_json(cert: &InvariantCertificate) -> Json {
    let candidate = match &cert.candidate {
        CertCandidate::Poly(f) => Json::str(format_poly(f)),
        CertCandidate::LogDeriv(l) => logderiv_json(l),
    };
    Json::Obj(vec![
        ("candidate", candidate),
        ("cofactor", Json::str(format_poly(&cert.cofactor))),
        ("verdict", Json::str(verdict_str(&cert.verdict))),
        ("residual", ratfn_json(&cert.residual)),
    ])
}

fn iif_json(kv: &Poly2, verdict: &ExactVerdict) -> Json {
    let (word, residual) = match verdict {
        ExactVerdict::Pass => ("pass", Poly2::zero()),
        ExactVerdict::Fail { residual } => ("fail", residual.clone()),
    };
    Json::Obj(vec![
        ("cofactor", Json::str(format_poly(kv))),
        ("verdict", Json::str(word)),
        ("residual", Json::str(format_poly(&residual))),
    ])
}

fn traj_json(traj: &Trajectory) -> Json {
    let (t_end, x_end, y_end) = *traj.samples.last().expect("trajectory is never empty");
    Json::Obj(vec![
        ("samples", Json::Int(traj.samples.len() as i64)),
        ("steps", Json::Int(traj.steps as i64)),
        ("rejected", Json::Int(traj.rejected as i64)),
        ("tol", Json::Float(traj.tol)),
        ("t_end", Json::Float(t_end)),
        ("x_end", Json::Float(x_end)),
        ("y_end", Json::Float(y_end)),
    ])
}

fn drift_json(label: &str, rep: &DriftReport, max_allowed: f64) -> Json {
    Json::Obj(vec![
        ("label", Json::str(label)),
        ("h0", Json::Float(rep.h0)),
        ("max_rel_drift", Json::Float(rep.max_rel_drift)),
        ("samples_evaluated", Json::Int(rep.samples_evaluated as i64)),
        ("skipped", Json::Int(rep.skipped as i64)),
        ("max_allowed", Json::Float(max_allowed)),
        ("met", Json::Bool(rep.max_rel_drift < max_allowed)),
    ])
}

fn write_csv(
    path: &PathBuf,
    traj: &Trajectory,
    h: Option<&dyn Fn(f64, f64) -> Option<f64>>,
) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(if h.is_some() { "t,x,y,H\n" } else { "t,x,y\n" });
    for &(t, x, y) in &traj.samples {
        out.push_str(&fmt_f64(t));
        out.push(',');
        out.push_str(&fmt_f64(x));
        out.push(',');
        out.push_str(&fmt_f64(y));
        if let Some(h) = h {
            out.push(',');
            if let Some(v) = h(x, y) {
                out.push_str(&fmt_f64(v));
            }
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// input parsing

fn parse_poly_flag(flag: &str, text: &str) -> Result<Poly2, CliError> {
    parse_poly(text).map_err(|e| CliError(format!("--{flag}: {e}")))
}

fn parse_rat_flag(flag: &str, text: &str) -> Result<Rational, CliError> {
    rat_from_str(text).map_err(|e| CliError(format!("--{flag}: {e}")))
}

fn univariate_flag(flag: &str, text: &str) -> Result<Poly2, CliError> {
    let p = parse_poly_flag(flag, text)?;
    if p.degree_in(Var::Y) > 0 {
        return Err(CliError(format!("--{flag}: must not involve y")));
    }
    Ok(p)
}

/// The symbolic branches need a natural-number parameter; anything else is
/// handled on the numeric path only.
fn as_natural(r: &Rational) -> Option<u32> {
    if r.is_integer() {
        r.to_integer().to_u32()
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// simulation shared by `family` subcommands

struct SimBlocks {
    trajectory: Json,
    drift_block: Json,
    met: bool,
}

fn run_family_sim(
    sys: &PlanarSystem,
    label: &str,
    h: &dyn Fn(f64, f64) -> Option<f64>,
    flags: &SimFlags,
    inputs: &mut Inputs,
) -> Result<SimBlocks, CliError> {
    let (x0, y0, t1) = match (flags.x0, flags.y0, flags.t1) {
        (Some(x0), Some(y0), Some(t1)) => (x0, y0, t1),
        _ => {
            return Err(CliError(
                "--simulate needs --x0, --y0, and --t1".to_string(),
            ))
        }
    };
    inputs.add("x0", fmt_f64(x0));
    inputs.add("y0", fmt_f64(y0));
    inputs.add("t1", fmt_f64(t1));
    inputs.add("tol", fmt_f64(flags.tol));
    inputs.add("max_drift", fmt_f64(flags.max_drift));
    let traj = integrate(sys, x0, y0, t1, flags.tol)?;
    let rep = drift(h, &traj)?;
    if let Some(path) = &flags.csv {
        write_csv(path, &traj, Some(h))?;
    }
    Ok(SimBlocks {
        trajectory: traj_json(&traj),
        drift_block: drift_json(label, &rep, flags.max_drift),
        met: rep.max_rel_drift < flags.max_drift,
    })
}

// ---------------------------------------------------------------------------
// construct

fn construct_second(args: SecondOrderArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("a0", &args.a0);
    inputs.add("a1", &args.a1);
    inputs.add("a2", &args.a2);
    inputs.add("g0", &args.g0);
    inputs.add("g1", &args.g1);
    let ode = LinearODE2::new(
        univariate_flag("a0", &args.a0)?,
        univariate_flag("a1", &args.a1)?,
        univariate_flag("a2", &args.a2)?,
    )?;
    let g = ChangeOfVar::new(
        parse_poly_flag("g0", &args.g0)?,
        parse_poly_flag("g1", &args.g1)?,
    )?;
    let sys = build_second_order(&ode, &g)?;
    let k = predicted_cofactor_2nd(&ode, &g)?;
    let (q_obj, k_q) = q_object_2nd(&ode, &g)?;

    let mut certs = vec![];
    let q_cert = invariant_darboux_check(&sys, &q_obj);
    let mut ok = q_cert.passed() && q_cert.cofactor == k_q;
    certs.push(cert_json(&q_cert));

    if let Some(w_text) = &args.w {
        inputs.add("w", w_text);
        let w = univariate_flag("w", w_text)?;
        if w.is_zero() {
            return Err(CliError("--w: must be nonzero".to_string()));
        }
        let f = &(g.g1() * &w.partial_x()) - &(g.g0() * &w);
        if f.is_zero() {
            return Err(CliError(
                "--w: g1 w' - g0 w vanishes identically, no curve to certify".to_string(),
            ));
        }
        let cert = invariant_poly_check(&sys, &f);
        ok = ok && cert.passed() && cert.cofactor == k;
        certs.push(cert_json(&cert));
    }

    let kv = &k_q + &k.scale(&rat_int(2));
    let iif = iif_divergence_check(&sys, &kv);
    ok = ok && iif.passed();

    let extras = vec![
        ("predicted_cofactor", Json::str(format_poly(&k))),
        (
            "q_object",
            Json::Obj(vec![
                ("log_deriv", logderiv_json(&q_obj)),
                ("cofactor", Json::str(format_poly(&k_q))),
            ]),
        ),
        ("iif", iif_json(&kv, &iif)),
    ];
    Ok(Outcome {
        report: report(
            "construct second-order",
            &inputs,
            Some(&sys),
            extras,
            certs,
            Json::Null,
        ),
        ok,
    })
}

fn construct_first(args: FirstOrderArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("a0", &args.a0);
    inputs.add("a1", &args.a1);
    inputs.add("h0", &args.h0);
    inputs.add("h1", &args.h1);
    inputs.add("g0", &args.g0);
    inputs.add("g1", &args.g1);
    let ode = LinearODE1::new(
        univariate_flag("a0", &args.a0)?,
        univariate_flag("a1", &args.a1)?,
        univariate_flag("h0", &args.h0)?,
        univariate_flag("h1", &args.h1)?,
    )?;
    let g = ChangeOfVar::new(
        parse_poly_flag("g0", &args.g0)?,
        parse_poly_flag("g1", &args.g1)?,
    )?;
    let sys = build_first_order(&ode, &g)?;
    let k = predicted_cofactor_1st(&ode, &g)?;
    let extras = vec![("predicted_cofactor", Json::str(format_poly(&k)))];
    Ok(Outcome {
        report: report(
            "construct first-order",
            &inputs,
            Some(&sys),
            extras,
            vec![],
            Json::Null,
        ),
        ok: true,
    })
}

// ---------------------------------------------------------------------------
// verify

fn parse_system(p_text: &str, q_text: &str) -> Result<PlanarSystem, CliError> {
    let p = parse_poly_flag("p", p_text)?;
    let q = parse_poly_flag("q", q_text)?;
    if p.is_zero() && q.is_zero() {
        return Err(CliError("--p, --q: must not both vanish".to_string()));
    }
    Ok(PlanarSystem::new(p, q))
}

fn verify_invariant(args: VerifyInvariantArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("p", &args.p);
    inputs.add("q", &args.q);
    inputs.add("f", &args.f);
    let sys = parse_system(&args.p, &args.q)?;
    let f = parse_poly_flag("f", &args.f)?;
    if f.is_zero() {
        return Err(CliError("--f: must be nonzero".to_string()));
    }
    let cert = invariant_poly_check(&sys, &f);
    let ok = cert.passed();
    Ok(Outcome {
        report: report(
            "verify invariant",
            &inputs,
            Some(&sys),
            vec![],
            vec![cert_json(&cert)],
            Json::Null,
        ),
        ok,
    })
}

fn verify_darboux(args: VerifyDarbouxArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("p", &args.p);
    inputs.add("q", &args.q);
    inputs.add("lx_num", &args.lx_num);
    inputs.add("lx_den", &args.lx_den);
    inputs.add("ly_num", &args.ly_num);
    inputs.add("ly_den", &args.ly_den);
    let sys = parse_system(&args.p, &args.q)?;
    let lx_den = parse_poly_flag("lx-den", &args.lx_den)?;
    let ly_den = parse_poly_flag("ly-den", &args.ly_den)?;
    if lx_den.is_zero() || ly_den.is_zero() {
        return Err(CliError("log-derivative denominators must be nonzero".to_string()));
    }
    let obj = DarbouxLogDeriv {
        lx: RatFn::new(parse_poly_flag("lx-num", &args.lx_num)?, lx_den),
        ly: RatFn::new(parse_poly_flag("ly-num", &args.ly_num)?, ly_den),
    };
    let cert = invariant_darboux_check(&sys, &obj);
    let ok = cert.passed();
    Ok(Outcome {
        report: report(
            "verify darboux",
            &inputs,
            Some(&sys),
            vec![],
            vec![cert_json(&cert)],
            Json::Null,
        ),
        ok,
    })
}

fn verify_iif(args: VerifyIifArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("p", &args.p);
    inputs.add("q", &args.q);
    inputs.add("kv", &args.kv);
    let sys = parse_system(&args.p, &args.q)?;
    let kv = parse_poly_flag("kv", &args.kv)?;
    let verdict = iif_divergence_check(&sys, &kv);
    let ok = verdict.passed();
    Ok(Outcome {
        report: report(
            "verify iif",
            &inputs,
            Some(&sys),
            vec![("iif", iif_json(&kv, &verdict))],
            vec![],
            Json::Null,
        ),
        ok,
    })
}

// ---------------------------------------------------------------------------
// families

fn family_orth(args: OrthArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("omega1", &args.omega1);
    inputs.add("l", &args.l);
    inputs.add("n", &args.n);
    let spec = OrthFamilySpec::new(
        univariate_flag("omega1", &args.omega1)?,
        univariate_flag("l", &args.l)?,
        parse_rat_flag("n", &args.n)?,
    )?;
    let sys = orth_system(&spec);

    let mut extras = vec![];
    let mut certs = vec![];
    let mut ok = true;
    if !args.float {
        if let Some(_n) = as_natural(spec.n()) {
            let w = orthpoly_solve(&spec)?;
            let (curve, cofactor) = algcurve_linear_y(&spec, &w);
            let cert = invariant_poly_check(&sys, &curve);
            ok = cert.passed() && cert.cofactor == cofactor;
            extras.push(("solution", Json::str(format_poly(&w))));
            certs.push(cert_json(&cert));
        }
    }

    let mut drift_block = Json::Null;
    if args.sim.simulate {
        let spec_h = spec.clone();
        let h = move |x: f64, y: f64| orthfam_h_eval(&spec_h, x, y).ok();
        let sim = run_family_sim(
            &sys,
            "closed-form solution ratio",
            &h,
            &args.sim,
            &mut inputs,
        )?;
        extras.push(("trajectory", sim.trajectory));
        drift_block = sim.drift_block;
        ok = ok && sim.met;
    }

    Ok(Outcome {
        report: report("family orth", &inputs, Some(&sys), extras, certs, drift_block),
        ok,
    })
}

fn family_lv(args: LvArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("ell", &args.ell);
    let ell = parse_rat_flag("ell", &args.ell)?;
    let sys = lv::lv_system(&ell)?;
    let transformed = lv::lv_transformed_system(&ell)?;

    let mut extras = vec![];
    let mut certs = vec![];
    let mut ok = true;
    if !args.float {
        if let Some(n) = as_natural(&ell).filter(|&n| n >= 1) {
            let (f_uv, f_xy) = lv::lv_invariant_poly(n)?;
            let cert_xy = invariant_poly_check(&sys, &f_xy);
            let cert_uv = invariant_poly_check(&transformed, &f_uv);
            ok = cert_xy.passed() && cert_uv.passed();
            let outcome = quadratic_in_v_irreducibility(&f_uv, Var::Y)
                .map(|o| irreducibility_str(&o))
                .unwrap_or("wrong-shape");
            extras.push((
                "transformed",
                Json::Obj(vec![
                    ("system", system_json(&transformed)),
                    ("certificates", Json::Arr(vec![cert_json(&cert_uv)])),
                ]),
            ));
            extras.push(("irreducibility", Json::str(outcome)));
            certs.push(cert_json(&cert_xy));
        }
    }

    let mut drift_block = Json::Null;
    if args.sim.simulate {
        let ev = lv::lv_display_evaluator(rat_to_f64(&ell))?;
        let label = ev.label().to_string();
        let h = ev.drift_fn();
        let sim = run_family_sim(&sys, &label, &h, &args.sim, &mut inputs)?;
        extras.push(("trajectory", sim.trajectory));
        drift_block = sim.drift_block;
        ok = ok && sim.met;
    }

    Ok(Outcome {
        report: report("family lv", &inputs, Some(&sys), extras, certs, drift_block),
        ok,
    })
}

fn family_new(args: NewArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("a", &args.a);
    inputs.add("ell", &args.ell);
    let a = parse_rat_flag("a", &args.a)?;
    let ell = parse_rat_flag("ell", &args.ell)?;
    let sys = newfam::newfam_system(&a, &ell)?;

    let mut extras = vec![(
        "predicted_cofactor",
        Json::str(format_poly(&newfam::newfam_cofactor(&a, &ell))),
    )];
    let mut certs = vec![];
    let mut ok = true;
    if !args.float {
        if let Some(n) = as_natural(&ell).filter(|&n| n >= 1) {
            match newfam::newfam_invariant(&a, n) {
                Ok((f, _k)) => {
                    let cert = invariant_poly_check(&sys, &f);
                    ok = cert.passed();
                    certs.push(cert_json(&cert));
                }
                Err(darboux::families::FamilyError::NoPolynomialSolution) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut drift_block = Json::Null;
    if args.sim.simulate {
        let ev = newfam::newfam_display_evaluator(rat_to_f64(&a), rat_to_f64(&ell))?;
        let label = ev.label().to_string();
        let h = ev.drift_fn();
        let sim = run_family_sim(&sys, &label, &h, &args.sim, &mut inputs)?;
        extras.push(("trajectory", sim.trajectory));
        drift_block = sim.drift_block;
        ok = ok && sim.met;
    }

    Ok(Outcome {
        report: report("family new", &inputs, Some(&sys), extras, certs, drift_block),
        ok,
    })
}

fn family_center(args: CenterArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("a", &args.a);
    inputs.add("b", &args.b);
    inputs.add("d", &args.d);
    let a = parse_rat_flag("a", &args.a)?;
    let b = parse_rat_flag("b", &args.b)?;
    let d = parse_rat_flag("d", &args.d)?;
    let sys = center::center_system(&a, &b, &d)?;
    let (conic, _k, ev) = center::center_conic_and_h(&a, &b, &d)?;
    let (line, _k_line) = center::center_line_object(&a);

    let conic_cert = invariant_poly_check(&sys, &conic);
    let line_cert = invariant_darboux_check(&sys, &line);
    let mut ok = conic_cert.passed() && line_cert.passed();
    let certs = vec![cert_json(&conic_cert), cert_json(&line_cert)];

    let mut extras = vec![];
    let mut drift_block = Json::Null;
    if args.sim.simulate {
        let label = ev.label().to_string();
        let h = ev.drift_fn();
        let sim = run_family_sim(&sys, &label, &h, &args.sim, &mut inputs)?;
        extras.push(("trajectory", sim.trajectory));
        drift_block = sim.drift_block;
        ok = ok && sim.met;
    }

    Ok(Outcome {
        report: report("family center", &inputs, Some(&sys), extras, certs, drift_block),
        ok,
    })
}

fn irreducibility_str(outcome: &IrreducibilityOutcome) -> &'static str {
    match outcome {
        IrreducibilityOutcome::IrreducibleByCriterion => "irreducible-by-criterion",
        IrreducibilityOutcome::Inconclusive => "inconclusive",
        IrreducibilityOutcome::ReducibleWitness { .. } => "reducible",
    }
}

// ---------------------------------------------------------------------------
// simulate

fn simulate_cmd(args: SimulateArgs) -> Result<Outcome, CliError> {
    let mut inputs = Inputs::new();
    inputs.add("p", &args.p);
    inputs.add("q", &args.q);
    inputs.add("x0", fmt_f64(args.x0));
    inputs.add("y0", fmt_f64(args.y0));
    inputs.add("t1", fmt_f64(args.t1));
    inputs.add("tol", fmt_f64(args.tol));
    let sys = parse_system(&args.p, &args.q)?;
    let traj = integrate(&sys, args.x0, args.y0, args.t1, args.tol)?;
    if let Some(path) = &args.csv {
        write_csv(path, &traj, None)?;
    }
    Ok(Outcome {
        report: report(
            "simulate",
            &inputs,
            Some(&sys),
            vec![("trajectory", traj_json(&traj))],
            vec![],
            Json::Null,
        ),
        ok: true,
    })
}
