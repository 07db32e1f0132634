//! JSON reports and their text renderings.
//!
//! Field names are stable within a `report_version`; everything except the
//! `timing` object is a pure function of the command line and input.

use std::fmt::Write;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};

use symsep::permanent::{gram_from_factors, marcus_bounds_check, MarcusReport};
use symsep::separability::{classify_with, verify_result2_with, Classification, ClassifyOptions};
use symsep::state::tensor_product;
use symsep::symmetry::{is_antisymmetric, is_permutation_invariant, translation_analyze};
use symsep::verify::SuiteReport;
use symsep::{tol, LoadedState, ProductState, PureState, Result, StateFile};

pub const REPORT_VERSION: u32 = 1;

pub fn attach_timing(value: &mut Value, elapsed: Duration) {
    value["timing"] = json!({ "elapsed_ms": elapsed.as_secs_f64() * 1e3 });
}

fn one_based(parties: &[usize]) -> Vec<usize> {
    parties.iter().map(|p| p + 1).collect()
}

fn pairs(v: &[symsep::C64]) -> Value {
    v.iter().map(|a| json!([a.re, a.im])).collect()
}

fn input(path: &Path, kind: &str, psi: &PureState) -> Value {
    json!({
        "path": path.display().to_string(),
        "kind": kind,
        "dims": psi.dims(),
        "n_parties": psi.n_parties(),
        "dimension": psi.dimension(),
    })
}

fn symmetry(psi: &PureState) -> Value {
    let translation = translation_analyze(psi).ok().map(|t| {
        json!({
            "is_eigenstate": t.is_eigenstate,
            "theta": t.theta,
            "residual": t.residual,
            "overlap": [t.overlap.re, t.overlap.im],
        })
    });
    json!({
        "permutation_invariant": is_permutation_invariant(psi, tol::SYMMETRY).ok(),
        "antisymmetric": is_antisymmetric(psi, tol::SYMMETRY).ok(),
        "translation": translation,
    })
}

fn classification(c: &Classification, opts: &ClassifyOptions) -> Value {
    let cuts: Vec<Value> = c
        .evidence
        .iter()
        .map(|e| {
            json!({
                "cut": e.cut.to_string(),
                "side_a": one_based(e.cut.side_a()),
                "side_b": one_based(e.cut.side_b()),
                "rank": e.rank,
                "singular_values": e.singular_values,
            })
        })
        .collect();
    let factors = c
        .factors
        .as_ref()
        .map(|f| f.factors().iter().map(|v| pairs(v)).collect::<Vec<_>>());
    json!({
        "verdict": c.verdict.as_str(),
        "witness": c.witness.as_ref().map(ToString::to_string),
        "rel_tol": opts.rel_tol,
        "ranks": c.ranks(),
        "cuts": cuts,
        "factors": factors,
        "factor_fidelity": c.factor_fidelity,
    })
}

fn marcus(r: &MarcusReport) -> Value {
    json!({
        "n": r.n,
        "perm": r.perm,
        "imag_residue": r.imag_residue,
        "lower_ok": r.lower_ok,
        "upper_ok": r.upper_ok,
        "at_lower": r.at_lower(),
        "at_upper": r.at_upper(),
    })
}

fn product_permanent(phi: &ProductState) -> Result<Value> {
    Ok(marcus(&marcus_bounds_check(&gram_from_factors(phi)?)?))
}

pub fn classify(path: &Path, state: &LoadedState, opts: &ClassifyOptions, seed: u64) -> Result<Value> {
    let (psi, permanent) = match state {
        LoadedState::Pure(psi) => (psi.clone(), Value::Null),
        LoadedState::Product(phi) => (tensor_product(phi)?, product_permanent(phi)?),
        LoadedState::Ensemble(_) => {
            return Err(symsep::Error::InvalidParameter(
                "classify takes a pure or product state, not an ensemble".into(),
            ))
        }
    };
    psi.require_normalized()?;
    let c = classify_with(&psi, opts)?;
    Ok(json!({
        "report_version": REPORT_VERSION,
        "command": "classify",
        "seed": seed,
        "input": input(path, state.kind(), &psi),
        "symmetry": symmetry(&psi),
        "classification": classification(&c, opts),
        "permanent": permanent,
    }))
}

pub fn symmetrize(
    path: &Path,
    phi: &ProductState,
    opts: &ClassifyOptions,
    seed: u64,
) -> Result<(Value, StateFile)> {
    let r = verify_result2_with(phi, opts)?;
    let file = StateFile::from_pure(&r.symmetrized);
    let state = serde_json::to_value(&file).expect("state files serialize to JSON");
    let value = json!({
        "report_version": REPORT_VERSION,
        "command": "symmetrize",
        "seed": seed,
        "input": input(path, "product", &tensor_product(phi)?),
        "symmetrized": {
            "norm_squared": r.norm_squared,
            "nonzero": r.nonzero,
            "permanent": product_permanent(phi)?,
        },
        "result2": {
            "holds": r.holds,
            "factors_identical": r.factors_identical,
        },
        "symmetry": symmetry(&r.symmetrized),
        "classification": classification(&r.verdict, opts),
        "state": state,
    });
    Ok((value, file))
}

pub fn verify(r: &SuiteReport) -> Value {
    let properties: Vec<Value> = r
        .properties
        .iter()
        .map(|p| {
            json!({
                "suite": p.suite,
                "name": p.name,
                "passed": p.passed(),
                "trials": p.trials,
                "failures": p.failures,
                "metric": p.metric,
                "bound": { "relation": p.bound.relation(), "value": p.bound.value() },
                "worst": p.worst,
                "margin": p.margin,
                "first_failure": p.first_failure,
            })
        })
        .collect();
    json!({
        "report_version": REPORT_VERSION,
        "command": "verify",
        "suite": r.suite.name(),
        "seed": r.seed,
        "trials": r.trials,
        "passed": r.passed(),
        "properties": properties,
    })
}

fn fmt_num(v: &Value) -> String {
    match v.as_f64() {
        Some(x) => format!("{x:.6e}"),
        None => "-".into(),
    }
}

fn timing_line(out: &mut String, v: &Value) {
    let _ = writeln!(out, "elapsed: {:.1} ms", v["timing"]["elapsed_ms"].as_f64().unwrap_or(0.0));
}

fn symmetry_lines(out: &mut String, s: &Value) {
    let flag = |v: &Value| v.as_bool().map_or("n/a".to_string(), |b| b.to_string());
    let _ = writeln!(out, "permutation invariant: {}", flag(&s["permutation_invariant"]));
    let _ = writeln!(out, "antisymmetric: {}", flag(&s["antisymmetric"]));
    let theta = match &s["translation"] {
        Value::Null => "n/a".to_string(),
        t if t["is_eigenstate"] == true => format!("eigenstate, theta = {:.6}", t["theta"].as_f64().unwrap_or(0.0)),
        _ => "not an eigenstate".to_string(),
    };
    let _ = writeln!(out, "translation: {theta}");
}

fn classification_lines(out: &mut String, c: &Value) {
    let _ = writeln!(out, "verdict: {}", c["verdict"].as_str().unwrap_or("?"));
    if let Some(w) = c["witness"].as_str() {
        let _ = writeln!(out, "witness: {w}");
    }
    if let Some(f) = c["factor_fidelity"].as_f64() {
        let _ = writeln!(out, "factor fidelity: {f:.12}");
    }
    for cut in c["cuts"].as_array().into_iter().flatten() {
        let _ = writeln!(out, "  {:<20} rank {}", cut["cut"].as_str().unwrap_or(""), cut["rank"]);
    }
}

fn permanent_lines(out: &mut String, p: &Value) {
    if p.is_null() {
        return;
    }
    let _ = writeln!(
        out,
        "Perm(Gram) = {} (|Im| {}, bounds {})",
        p["perm"].as_f64().unwrap_or(f64::NAN),
        fmt_num(&p["imag_residue"]),
        if p["lower_ok"] == true && p["upper_ok"] == true { "ok" } else { "violated" },
    );
}

pub fn classify_text(v: &Value) -> String {
    let mut out = String::new();
    let i = &v["input"];
    let _ = writeln!(out, "{} ({} state, dims {})", i["path"].as_str().unwrap_or(""), i["kind"].as_str().unwrap_or(""), i["dims"]);
    symmetry_lines(&mut out, &v["symmetry"]);
    classification_lines(&mut out, &v["classification"]);
    permanent_lines(&mut out, &v["permanent"]);
    timing_line(&mut out, v);
    out
}

pub fn symmetrize_text(v: &Value) -> String {
    let mut out = String::new();
    let s = &v["symmetrized"];
    let _ = writeln!(out, "norm_squared: {}", s["norm_squared"].as_f64().unwrap_or(f64::NAN));
    permanent_lines(&mut out, &s["permanent"]);
    let _ = writeln!(out, "factors identical: {}", v["result2"]["factors_identical"]);
    let _ = writeln!(out, "entangled unless factors identical: {}", v["result2"]["holds"]);
    classification_lines(&mut out, &v["classification"]);
    timing_line(&mut out, v);
    out
}

pub fn verify_text(v: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {} seed {} trials {}", v["suite"].as_str().unwrap_or(""), v["seed"], v["trials"]);
    for p in v["properties"].as_array().into_iter().flatten() {
        let status = if p["passed"] == true { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{status} {:<40} failures {:>4}/{:<5} worst {} (bound {} {}) margin {}",
            format!("{}.{}", p["suite"].as_str().unwrap_or(""), p["name"].as_str().unwrap_or("")),
            p["failures"],
            p["trials"],
            fmt_num(&p["worst"]),
            p["bound"]["relation"].as_str().unwrap_or(""),
            fmt_num(&p["bound"]["value"]),
            fmt_num(&p["margin"]),
        );
        if let Some(f) = p["first_failure"].as_str() {
            let _ = writeln!(out, "    first failure: {f}");
        }
    }
    let _ = writeln!(out, "{}", if v["passed"] == true { "all properties passed" } else { "FAILED" });
    timing_line(&mut out, v);
    out
}
