//! The four verbs: `list`, `solve`, `phi`, `verify`.

use serde_json::{json, Value};
use spectra_forge::models::{catalog, Model, ModelId, ModelSpec, Values};
use spectra_forge::unirrep::UnirrepSolution;
use spectra_forge::verify::{
    duality_suite, ladder_family_model, ladder_suite, ode_suite, oracle_suite, DualityCheck, LadderOutcome,
    OracleCheck, ResidualCheck,
};
use std::io::Write;

use crate::config::RunConfig;
use crate::error::CliError;

/// Float rendering used in every CSV and table cell: 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", if v == 0.0 { 0.0 } else { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

fn spec_json(spec: &ModelSpec) -> Value {
    let params: Vec<Value> = spec
        .params
        .iter()
        .map(|p| json!({"name": p.name, "default": p.default, "domain": p.domain.describe(), "doc": p.doc}))
        .collect();
    let qn: Vec<Value> = spec
        .qn_schema
        .iter()
        .map(|p| json!({"name": p.name, "default": p.default, "domain": p.domain.describe(), "doc": p.doc}))
        .collect();
    json!({
        "id": spec.id.as_str(),
        "dimension": spec.dimension,
        "spectrum": spec.spectrum.as_str(),
        "summary": spec.summary,
        "level_index": spec.level_index,
        "params": params,
        "quantum_numbers": qn,
    })
}

pub fn list(json_out: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let specs = catalog();
    if json_out {
        let arr: Vec<Value> = specs.iter().map(spec_json).collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&arr)?)?;
        return Ok(());
    }
    for s in &specs {
        let names: Vec<&str> = s.params.iter().map(|p| p.name).collect();
        writeln!(
            out,
            "{} ({})  dim={}  params={}  {}",
            s.id,
            s.spectrum.as_str(),
            s.dimension,
            names.join(","),
            s.summary
        )?;
    }
    Ok(())
}

fn build_model(cfg: &RunConfig) -> Result<Model, CliError> {
    Ok(Model::new(cfg.model, &cfg.params, &cfg.qn)?)
}

fn values_json(v: &Values) -> Value {
    Value::Object(v.iter().map(|(k, x)| (k.clone(), json!(x))).collect())
}

fn row_json(s: &UnirrepSolution) -> Value {
    json!({
        "p": s.p,
        "branch_eps1": s.branch.0,
        "branch_eps2": s.branch.1,
        "u": s.u,
        "E": s.energy,
        "phi_min": s.phi_min,
        "u_set": s.u_set.as_str(),
        "boundary_residual": s.boundary_residual,
        "positive": s.positive,
    })
}

pub fn solve(cfg: &RunConfig, format: Format, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let model = build_model(cfg)?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for p in cfg.p..=cfg.p_max {
        let report = model.solve(p)?;
        rows.extend(report.solutions);
        notes.extend(report.notes);
    }
    for n in &notes {
        writeln!(diag, "note: {n}")?;
    }
    match format {
        Format::Json => {
            let doc = json!({
                "model": model.id().as_str(),
                "params": values_json(model.params()),
                "quantum_numbers": values_json(model.quantum_numbers()),
                "rows": rows.iter().map(row_json).collect::<Vec<_>>(),
                "notes": notes,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["p", "branch_eps1", "branch_eps2", "u", "E", "phi_min"])?;
            for s in &rows {
                w.write_record([
                    s.p.to_string(),
                    s.branch.0.to_string(),
                    s.branch.1.to_string(),
                    fmt17(s.u),
                    fmt17(s.energy),
                    fmt17(s.phi_min),
                ])?;
            }
            w.flush()?;
        }
        Format::Table => {
            writeln!(out, "{:>3} {:>3} {:>3} {:>24} {:>24} {:>24}", "p", "e1", "e2", "u", "E", "phi_min")?;
            for s in &rows {
                writeln!(
                    out,
                    "{:>3} {:>3} {:>3} {:>24} {:>24} {:>24}",
                    s.p,
                    s.branch.0,
                    s.branch.1,
                    fmt17(s.u),
                    fmt17(s.energy),
                    fmt17(s.phi_min)
                )?;
            }
        }
    }
    Ok(())
}

/// Sampling request of the `phi` verb.
#[derive(Debug, Clone)]
pub struct PhiRequest {
    /// Index into the solutions of `cfg.p`, used when `u`/`energy` are absent.
    pub solution: usize,
    pub u: Option<f64>,
    pub energy: Option<f64>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub points: usize,
    pub closed: bool,
}

pub fn phi(cfg: &RunConfig, req: &PhiRequest, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let model = build_model(cfg)?;
    let factored = model.structure_function()?;
    let (u, w, energy) = match (req.u, req.energy) {
        (Some(u), Some(e)) => {
            let w = factored.law.w_of_energy(e).map_err(spectra_forge::models::ModelError::from)?;
            (u, w, e)
        }
        (None, None) => {
            let report = model.solve(cfg.p)?;
            let count = report.solutions.len();
            let s = report.solutions.into_iter().nth(req.solution).ok_or_else(|| {
                CliError::Config(format!("solution index {} out of range ({count} solutions at p = {})", req.solution, cfg.p))
            })?;
            writeln!(
                diag,
                "using p={} branch=({},{}) u={} E={}",
                s.p,
                s.branch.0,
                s.branch.1,
                fmt17(s.u),
                fmt17(s.energy)
            )?;
            (s.u, s.w, s.energy)
        }
        _ => return Err(CliError::Config("--u and --energy must be given together".into())),
    };
    let closed = if req.closed {
        Some(
            model
                .closed_phi(energy)?
                .ok_or_else(|| CliError::Config(format!("model {} has no closed-form structure function", model.id())))?,
        )
    } else {
        None
    };
    if req.points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let x_min = req.x_min.unwrap_or(0.0);
    let x_max = req.x_max.unwrap_or(cfg.p as f64 + 1.0);
    let mut w_csv = csv::Writer::from_writer(out);
    if closed.is_some() {
        w_csv.write_record(["x", "phi", "closed"])?;
    } else {
        w_csv.write_record(["x", "phi"])?;
    }
    for k in 0..req.points {
        let x = x_min + (x_max - x_min) * k as f64 / (req.points - 1) as f64;
        let f = factored.eval_with_w(x, u, w, energy);
        match &closed {
            Some(c) => w_csv.write_record([fmt17(x), fmt17(f), fmt17(c.eval(x, u))])?,
            None => w_csv.write_record([fmt17(x), fmt17(f)])?,
        }
    }
    w_csv.flush()?;
    Ok(())
}

/// Which verification suites to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Odes,
    Ladders,
    Oracle,
    Duality,
    All,
}

impl Selector {
    fn includes(self, other: Selector) -> bool {
        self == Selector::All || self == other
    }
}

/// Sizes of the verification suites.
#[derive(Debug, Clone, Copy)]
pub struct SuiteSizes {
    pub ode_tuples: usize,
    pub ladder_tuples: usize,
    pub oracle_sets: usize,
    pub duality_tuples: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            ode_tuples: 20,
            ladder_tuples: 10,
            oracle_sets: 1,
            duality_tuples: 30,
        }
    }
}

fn ode_json(c: &ResidualCheck) -> Value {
    json!({
        "model": c.model.as_str(),
        "label": c.label,
        "quantum_numbers": values_json(&c.quantum_numbers),
        "residual": c.residual,
        "control_residual": c.control_residual,
        "passed": c.passed(),
    })
}

fn ladder_json(o: &LadderOutcome) -> Value {
    json!({
        "family": o.family,
        "model": ladder_family_model(o.family).as_str(),
        "label": o.label,
        "expected": o.expected,
        "measured": o.measured,
        "deviation": o.deviation,
        "spread": o.spread,
        "passed": o.passed(),
    })
}

fn oracle_json(c: &OracleCheck) -> Value {
    json!({
        "model": c.model.as_str(),
        "label": c.label,
        "node_target": c.node_target,
        "analytic": c.analytic,
        "eigenvalue": c.result.eigenvalue,
        "abs_error": (c.result.eigenvalue - c.analytic).abs(),
        "relative_error": c.relative_error,
        "boundary_residual": c.result.boundary_residual,
        "mesh": [c.result.mesh.0, c.result.mesh.1, c.result.mesh.2],
        "passed": c.passed(),
    })
}

fn duality_json(c: &DualityCheck) -> Value {
    json!({
        "omega": c.omega,
        "lambdas": c.lambdas,
        "n": c.n,
        "T": c.t,
        "K": c.k,
        "p": c.p,
        "oscillator_energy": c.oscillator_energy,
        "mapped_energy": c.mapped_energy,
        "kepler_energy": c.kepler_energy,
        "relative_error": c.relative_error,
        "round_trip_error": c.round_trip_error,
        "passed": c.passed(),
    })
}

fn summarize(name: &str, checks: Vec<Value>, metric: &str, failures: &mut Vec<String>, diag: &mut dyn Write) -> Result<Value, CliError> {
    let total = checks.len();
    let passed = checks.iter().filter(|c| c["passed"] == json!(true)).count();
    let worst = checks
        .iter()
        .filter_map(|c| c[metric].as_f64())
        .fold(0.0_f64, f64::max);
    for c in checks.iter().filter(|c| c["passed"] != json!(true)) {
        let who = c.get("family").or_else(|| c.get("model")).and_then(Value::as_str).unwrap_or(name);
        let label = c.get("label").and_then(Value::as_str).unwrap_or("");
        failures.push(format!("{name}: {who} {label}").trim_end().to_string());
    }
    writeln!(diag, "{name}: {passed}/{total} passed, max {metric} {worst:e}")?;
    Ok(json!({
        "passed": passed == total,
        "total": total,
        "passed_count": passed,
        format!("max_{metric}"): worst,
        "checks": checks,
    }))
}

pub fn verify(
    selector: Selector,
    model: Option<ModelId>,
    seed: u64,
    sizes: SuiteSizes,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<(), CliError> {
    let keep = |m: ModelId| model.is_none_or(|f| f == m);
    let mut suites = serde_json::Map::new();
    let mut failures = Vec::new();
    if selector.includes(Selector::Odes) {
        let models: Vec<ModelId> = ModelId::ALL.into_iter().filter(|m| keep(*m)).collect();
        let checks = ode_suite(&models, sizes.ode_tuples, seed)?;
        let v = summarize("odes", checks.iter().map(ode_json).collect(), "residual", &mut failures, diag)?;
        suites.insert("odes".into(), v);
    }
    if selector.includes(Selector::Ladders) {
        let outcomes = ladder_suite(sizes.ladder_tuples, seed)?;
        let checks = outcomes.iter().filter(|o| keep(ladder_family_model(o.family))).map(ladder_json).collect();
        let v = summarize("ladders", checks, "deviation", &mut failures, diag)?;
        suites.insert("ladders".into(), v);
    }
    if selector.includes(Selector::Oracle) {
        let checks = oracle_suite(sizes.oracle_sets, seed)?;
        let checks = checks.iter().filter(|c| keep(c.model)).map(oracle_json).collect();
        let v = summarize("oracle", checks, "abs_error", &mut failures, diag)?;
        suites.insert("oracle".into(), v);
    }
    if selector.includes(Selector::Duality) {
        let checks = duality_suite(sizes.duality_tuples, seed)?;
        let v = summarize("duality", checks.iter().map(duality_json).collect(), "relative_error", &mut failures, diag)?;
        suites.insert("duality".into(), v);
    }
    let passed = failures.is_empty();
    let report = json!({
        "seed": seed,
        "model": model.map(|m| m.as_str()),
        "passed": passed,
        "suites": suites,
        "failures": failures,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(failures.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(-0.125), "-1.2500000000000000e-1");
        let s = fmt17(1.0 / 3.0);
        assert_eq!(s.parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}
