use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use steklov_core::ball_spectrum;
use steklov_core::verification::{
    isoperimetric_sweep, mass_concentration_sweep, reciprocal_sum_bound, scaling_check,
};
use steklov_core::{solve_neumann_eps, solve_steklov, Spectrum};

use crate::config::{DensityChoice, Format, RunConfig, Task};
use crate::error::CliError;

/// First line of every CSV file the tool writes.
pub const CSV_CONFIG_PREFIX: &str = "# run_config=";

/// Results of a run, ready to be written.
pub struct Outcome {
    /// Lines for the terminal.
    pub summary: Vec<String>,
    /// JSON document (without the config).
    pub document: Value,
    /// CSV header and rows.
    pub table: (Vec<String>, Vec<Vec<String>>),
    /// Set when an inequality that must hold did not, or part of a sweep failed.
    pub failure: Option<CliError>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn spectrum_rows(s: &Spectrum) -> Vec<Vec<String>> {
    let mut rows = Vec::with_capacity(s.len());
    for c in &s.clusters {
        for k in c.start..c.start + c.size {
            rows.push(vec![
                (k + 1).to_string(),
                num(s.eigenvalues[k]),
                (c.start + 1).to_string(),
                c.size.to_string(),
                c.angular_index.map(|l| l.to_string()).unwrap_or_default(),
                s.residuals.get(k).map(|r| num(*r)).unwrap_or_default(),
            ]);
        }
    }
    rows
}

fn spectrum_header() -> Vec<String> {
    ["index", "eigenvalue", "cluster_start", "cluster_size", "angular_index", "residual"]
        .map(String::from)
        .to_vec()
}

fn cluster_summary(s: &Spectrum, limit: usize) -> String {
    s.clusters
        .iter()
        .take(limit)
        .map(|c| format!("{} x{}", c.value, c.size))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Execute the task of a config.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match &config.task {
        Task::BallSpectrum { params, count } => {
            let s = ball_spectrum(params, *count)?;
            let line = s.eigenvalues.iter().map(|v| num(*v)).collect::<Vec<_>>().join(", ");
            Ok(Outcome {
                summary: vec![line],
                table: (spectrum_header(), spectrum_rows(&s)),
                document: to_value(&s),
                failure: None,
            })
        }
        Task::Solve { domain, params, solver, density } => {
            let d = domain.resolve()?;
            let (s, extra) = match density {
                DensityChoice::Boundary { rho } => (solve_steklov(&d, params, *rho, solver)?, None),
                DensityChoice::Shell { eps, mass } => {
                    let (s, rho) = solve_neumann_eps(&d, params, *mass, *eps, solver)?;
                    (s, Some(rho))
                }
            };
            let lambda2 = s.lambda(2).map(num).unwrap_or_else(|| "none".into());
            let mut summary = vec![format!("lambda_2 = {lambda2}"), format!("clusters: {}", cluster_summary(&s, 6))];
            summary.extend(s.warnings.iter().map(|w| format!("warning: {w}")));
            let mut document = to_value(&s);
            if let Some(rho) = extra {
                document["density"] = to_value(&rho);
            }
            Ok(Outcome { summary, table: (spectrum_header(), spectrum_rows(&s)), document, failure: None })
        }
        Task::VerifyIsoperimetric { family, params, sweep } => {
            let reports = isoperimetric_sweep(family, params, sweep)?;
            let header = [
                "id", "area", "scale", "asymmetry", "asymmetry_error", "lambda2", "lambda2_ball",
                "stability_bound", "margin", "weak_margin", "tolerance", "degree", "degree_change",
                "holds", "error",
            ]
            .map(String::from)
            .to_vec();
            let rows = reports
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        num(r.area),
                        num(r.scale),
                        num(r.asymmetry),
                        num(r.asymmetry_error),
                        num(r.lambda2),
                        num(r.lambda2_ball),
                        num(r.stability_bound),
                        num(r.margin),
                        num(r.weak_margin),
                        num(r.tolerance),
                        r.degree.to_string(),
                        num(r.degree_change),
                        r.holds().to_string(),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let summary = reports
                .iter()
                .map(|r| match &r.error {
                    Some(e) => format!("{:<16} error: {e}", r.id),
                    None => format!(
                        "{:<16} A = {:.4}  lambda_2 = {:.8}  bound = {:.8}  margin = {:+.3e}  {}",
                        r.id,
                        r.asymmetry,
                        r.lambda2,
                        r.stability_bound,
                        r.margin,
                        if r.holds() { "ok" } else { "VIOLATED" }
                    ),
                })
                .collect();
            let violated: Vec<&str> =
                reports.iter().filter(|r| r.error.is_none() && !r.holds()).map(|r| r.id.as_str()).collect();
            let errored: Vec<String> = reports
                .iter()
                .filter_map(|r| r.error.as_ref().map(|e| format!("{}: {e}", r.id)))
                .collect();
            let failure = if !violated.is_empty() {
                Some(CliError::Violation(format!("stability margin violated for {}", violated.join(", "))))
            } else if !errored.is_empty() {
                Some(CliError::Solver(errored.join("; ")))
            } else {
                None
            };
            Ok(Outcome { summary, table: (header, rows), document: json!({ "reports": reports }), failure })
        }
        Task::VerifyReciprocalSum { domain, params, solver } => {
            let r = reciprocal_sum_bound(&domain.resolve()?, params, solver)?;
            let header = ["bound", "sum", "lambda2", "lambda3", "relative_gap", "normalization_defect", "boundary_mean"]
                .map(String::from)
                .to_vec();
            let row = [r.bound, r.sum, r.lambda2, r.lambda3, r.relative_gap, r.normalization_defect, r.boundary_mean]
                .map(num)
                .to_vec();
            let failure = (!r.holds())
                .then(|| CliError::Violation(format!("reciprocal sum {} below bound {}", r.sum, r.bound)));
            Ok(Outcome {
                summary: vec![
                    format!("bound = {}", r.bound),
                    format!("sum = {}", r.sum),
                    format!("relative gap = {:.3e}", r.relative_gap),
                ],
                table: (header, vec![row]),
                document: to_value(&r),
                failure,
            })
        }
        Task::VerifyScaling { domain, params, s, solver } => {
            let reports = s
                .iter()
                .map(|&s| scaling_check(domain, params, s, solver))
                .collect::<Result<Vec<_>, _>>()?;
            let header = ["s", "original", "rescaled", "relative_error"].map(String::from).to_vec();
            let rows = reports
                .iter()
                .map(|r| [r.s, r.original, r.rescaled, r.relative_error].map(num).to_vec())
                .collect();
            let summary = reports
                .iter()
                .map(|r| format!("s = {}: lambda_2 = {}, rescaled = {}, rel. err = {:.3e}", r.s, r.original, r.rescaled, r.relative_error))
                .collect();
            let bad: Vec<String> = reports.iter().filter(|r| !r.holds()).map(|r| num(r.s)).collect();
            let failure =
                (!bad.is_empty()).then(|| CliError::Violation(format!("scaling law off for s = {}", bad.join(", "))));
            Ok(Outcome { summary, table: (header, rows), document: json!({ "reports": reports }), failure })
        }
        Task::VerifyMassConcentration { domain, params, mass, eps, solver } => {
            let t = mass_concentration_sweep(&domain.resolve()?, params, *mass, eps, solver)?;
            let header = ["eps", "lambda1", "lambda2", "gap", "shell_value", "warnings"].map(String::from).to_vec();
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    vec![num(r.eps), num(r.lambda1), num(r.lambda2), num(r.gap), num(r.shell_value), r.warnings.join("; ")]
                })
                .collect();
            let mut summary = vec![format!("reference lambda_2 (rho = {}) = {}", t.rho, t.reference)];
            summary.extend(t.rows.iter().map(|r| format!("eps = {:<8} lambda_2 = {:.10}  gap = {:.4e}", r.eps, r.lambda2, r.gap)));
            let failure = (!t.gaps_strictly_decrease())
                .then(|| CliError::Violation("gaps are not strictly decreasing".to_string()));
            Ok(Outcome { summary, table: (header, rows), document: to_value(&t), failure })
        }
    }
}

/// JSON document with the config under `config`.
pub fn json_document(config: &RunConfig, outcome: &Outcome) -> Value {
    let mut doc = match &outcome.document {
        Value::Object(map) => Value::Object(map.clone()),
        other => json!({ "result": other }),
    };
    doc["config"] = to_value(config);
    doc
}

/// CSV text whose first line carries the config.
pub fn csv_document(config: &RunConfig, outcome: &Outcome) -> Result<String, CliError> {
    let mut out = Vec::new();
    writeln!(out, "{CSV_CONFIG_PREFIX}{}", serde_json::to_string(config)?)?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&outcome.table.0)?;
        for row in &outcome.table.1 {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(String::from_utf8(out).expect("utf-8 output"))
}

/// Write the outcome to `config.output`, or to stdout for `-`.
pub fn write_outcome(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let Some(path) = &config.output else { return Ok(()) };
    let text = match config.format {
        Format::Json => serde_json::to_string_pretty(&json_document(config, outcome))? + "\n",
        Format::Csv => csv_document(config, outcome)?,
    };
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    }
    Ok(())
}

/// Recover the config embedded in a file written by this tool.
pub fn read_embedded_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if let Some(first) = text.lines().next() {
        if let Some(rest) = first.strip_prefix(CSV_CONFIG_PREFIX) {
            return Ok(serde_json::from_str(rest)?);
        }
    }
    let doc: Value = serde_json::from_str(&text)?;
    let cfg = doc
        .get("config")
        .ok_or_else(|| CliError::Validation(format!("{} has no embedded config", path.display())))?;
    Ok(serde_json::from_value(cfg.clone())?)
}
