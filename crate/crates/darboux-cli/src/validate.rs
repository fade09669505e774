//! Re-verification of an emitted report: parse the recorded expression text,
//! re-run every exact check it claims, and compare against the recorded
//! verdicts. Structural damage (missing fields, unparseable expressions) is a
//! usage error; a check that no longer reproduces is a failed validation.

use std::path::Path;

use serde_json::Value;

use darboux::construct::{DarbouxLogDeriv, ExactVerdict, PlanarSystem};
use darboux::construct::iif_divergence_check;
use darboux::exprparse::{format_poly, parse_poly};
use darboux::verify::{invariant_darboux_check, invariant_poly_check, InvariantCertificate};
use darboux::{Poly2, RatFn};

use crate::json::Json;
use crate::{report, CliError, Inputs, Outcome};

pub fn validate_cmd(path: &Path) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let root: Value = serde_json::from_str(&text)
        .map_err(|e| CliError(format!("{}: not valid JSON: {e}", path.display())))?;

    let mut inputs = Inputs::new();
    inputs.add("file", &text);

    let mut checks: i64 = 0;
    let mut mismatches: Vec<String> = Vec::new();

    let sys = recorded_system(root.get("system"), "system", &mut mismatches)?;
    if let Some(sys) = &sys {
        recorded_certs(
            sys,
            root.get("certificates"),
            "certificates",
            &mut checks,
            &mut mismatches,
        )?;
        if let Some(iif) = root.get("iif").filter(|v| !v.is_null()) {
            recorded_iif(sys, iif, &mut checks, &mut mismatches)?;
        }
    }
    if let Some(tr) = root.get("transformed").filter(|v| !v.is_null()) {
        let tsys = recorded_system(tr.get("system"), "transformed.system", &mut mismatches)?;
        if let Some(tsys) = &tsys {
            recorded_certs(
                tsys,
                tr.get("certificates"),
                "transformed.certificates",
                &mut checks,
                &mut mismatches,
            )?;
        }
    }
    if let Some(d) = root.get("drift").filter(|v| !v.is_null()) {
        recorded_drift(d, &mut checks, &mut mismatches)?;
    }

    let ok = mismatches.is_empty();
    let extras = vec![
        ("checks", Json::Int(checks)),
        (
            "mismatches",
            Json::Arr(mismatches.iter().map(Json::str).collect()),
        ),
    ];
    Ok(Outcome {
        report: report(
            "report validate",
            &inputs,
            sys.as_ref(),
            extras,
            vec![],
            Json::Null,
        ),
        ok,
    })
}

fn field<'a>(v: &'a Value, key: &str, at: &str) -> Result<&'a Value, CliError> {
    v.get(key)
        .ok_or_else(|| CliError(format!("report field {at}.{key} is missing")))
}

fn text<'a>(v: &'a Value, key: &str, at: &str) -> Result<&'a str, CliError> {
    field(v, key, at)?
        .as_str()
        .ok_or_else(|| CliError(format!("report field {at}.{key} is not a string")))
}

fn poly(v: &Value, key: &str, at: &str) -> Result<Poly2, CliError> {
    parse_poly(text(v, key, at)?).map_err(|e| CliError(format!("{at}.{key}: {e}")))
}

fn ratfn(v: &Value, key: &str, at: &str) -> Result<RatFn, CliError> {
    let inner = field(v, key, at)?;
    let at = format!("{at}.{key}");
    let num = poly(inner, "num", &at)?;
    let den = poly(inner, "den", &at)?;
    if den.is_zero() {
        return Err(CliError(format!("{at}.den is zero")));
    }
    Ok(RatFn::new(num, den))
}

fn recorded_system(
    v: Option<&Value>,
    at: &str,
    mismatches: &mut Vec<String>,
) -> Result<Option<PlanarSystem>, CliError> {
    let v = match v {
        None | Some(Value::Null) => return Ok(None),
        Some(v) => v,
    };
    let p = poly(v, "P", at)?;
    let q = poly(v, "Q", at)?;
    if p.is_zero() && q.is_zero() {
        return Err(CliError(format!("{at}: P and Q both vanish")));
    }
    let sys = PlanarSystem::new(p, q);
    let degree = field(v, "degree", at)?
        .as_i64()
        .ok_or_else(|| CliError(format!("{at}.degree is not an integer")))?;
    if degree != sys.degree() {
        mismatches.push(format!(
            "{at}.degree recorded {degree}, recomputed {}",
            sys.degree()
        ));
    }
    // the emitter writes normalized representatives, so formatting back must
    // reproduce the recorded text
    if format_poly(sys.p()) != text(v, "P", at)? || format_poly(sys.q()) != text(v, "Q", at)? {
        mismatches.push(format!("{at} is not in normalized form"));
    }
    Ok(Some(sys))
}

fn recorded_certs(
    sys: &PlanarSystem,
    v: Option<&Value>,
    at: &str,
    checks: &mut i64,
    mismatches: &mut Vec<String>,
) -> Result<(), CliError> {
    let arr = match v {
        None | Some(Value::Null) => return Ok(()),
        Some(v) => v
            .as_array()
            .ok_or_else(|| CliError(format!("report field {at} is not an array")))?,
    };
    for (idx, entry) in arr.iter().enumerate() {
        let at = format!("{at}[{idx}]");
        let cert = rerun_certificate(sys, entry, &at)?;
        *checks += 1;
        compare_certificate(entry, &cert, &at, mismatches)?;
    }
    Ok(())
}

fn rerun_certificate(
    sys: &PlanarSystem,
    entry: &Value,
    at: &str,
) -> Result<InvariantCertificate, CliError> {
    match field(entry, "candidate", at)? {
        Value::String(expr) => {
            let f =
                parse_poly(expr).map_err(|e| CliError(format!("{at}.candidate: {e}")))?;
            if f.is_zero() {
                return Err(CliError(format!("{at}.candidate is zero")));
            }
            Ok(invariant_poly_check(sys, &f))
        }
        Value::Object(_) => {
            let candidate = field(entry, "candidate", at)?;
            let at = format!("{at}.candidate");
            let obj = DarbouxLogDeriv {
                lx: ratfn(candidate, "lx", &at)?,
                ly: ratfn(candidate, "ly", &at)?,
            };
            Ok(invariant_darboux_check(sys, &obj))
        }
        _ => Err(CliError(format!(
            "{at}.candidate is neither expression text nor a log-derivative object"
        ))),
    }
}

fn compare_certificate(
    entry: &Value,
    cert: &InvariantCertificate,
    at: &str,
    mismatches: &mut Vec<String>,
) -> Result<(), CliError> {
    let recorded_verdict = text(entry, "verdict", at)?;
    let recomputed = crate::verdict_str(&cert.verdict);
    if recorded_verdict != recomputed {
        mismatches.push(format!(
            "{at}.verdict recorded {recorded_verdict}, recomputed {recomputed}"
        ));
    }
    let recorded_cofactor = text(entry, "cofactor", at)?;
    let cofactor = format_poly(&cert.cofactor);
    if recorded_cofactor != cofactor {
        mismatches.push(format!(
            "{at}.cofactor recorded {recorded_cofactor}, recomputed {cofactor}"
        ));
    }
    let recorded_residual = ratfn(entry, "residual", at)?;
    let cross = &(&recorded_residual.num * &cert.residual.den)
        - &(&cert.residual.num * &recorded_residual.den);
    if !cross.is_zero() {
        mismatches.push(format!("{at}.residual does not reproduce"));
    }
    Ok(())
}

fn recorded_iif(
    sys: &PlanarSystem,
    entry: &Value,
    checks: &mut i64,
    mismatches: &mut Vec<String>,
) -> Result<(), CliError> {
    let at = "iif";
    let kv = poly(entry, "cofactor", at)?;
    let verdict = iif_divergence_check(sys, &kv);
    *checks += 1;
    let recomputed = match &verdict {
        ExactVerdict::Pass => "pass",
        ExactVerdict::Fail { .. } => "fail",
    };
    let recorded = text(entry, "verdict", at)?;
    if recorded != recomputed {
        mismatches.push(format!(
            "iif.verdict recorded {recorded}, recomputed {recomputed}"
        ));
    }
    let residual = match &verdict {
        ExactVerdict::Pass => Poly2::zero(),
        ExactVerdict::Fail { residual } => residual.clone(),
    };
    if text(entry, "residual", at)? != format_poly(&residual) {
        mismatches.push("iif.residual does not reproduce".to_string());
    }
    Ok(())
}

fn recorded_drift(
    entry: &Value,
    checks: &mut i64,
    mismatches: &mut Vec<String>,
) -> Result<(), CliError> {
    let at = "drift";
    let num = |key: &str| -> Result<f64, CliError> {
        field(entry, key, at)?
            .as_f64()
            .ok_or_else(|| CliError(format!("report field {at}.{key} is not a number")))
    };
    let h0 = num("h0")?;
    let max_rel_drift = num("max_rel_drift")?;
    let max_allowed = num("max_allowed")?;
    let met = field(entry, "met", at)?
        .as_bool()
        .ok_or_else(|| CliError("report field drift.met is not a boolean".to_string()))?;
    *checks += 1;
    if !h0.is_finite() || !(max_rel_drift >= 0.0) {
        mismatches.push("drift block carries non-finite measurements".to_string());
    }
    if met != (max_rel_drift < max_allowed) {
        mismatches.push("drift.met disagrees with the recorded measurements".to_string());
    }
    Ok(())
}
