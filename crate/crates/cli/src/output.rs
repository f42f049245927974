//! Artifact files: per-point norm table, JSON reports, convergence
//! certificates and two-column curve data.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use cartan_core::verifier::condition_name;
use cartan_core::{MembershipReport, OperatorFieldSample};
use serde::Serialize;

use crate::run::{ConvergenceRecord, RunOutcome};

/// Every float in a CSV is written with this many digits after the point.
pub const CSV_DIGITS: usize = 12;

fn num(x: f64) -> String {
    format!("{x:.prec$e}", prec = CSV_DIGITS)
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn norms_csv(sample: &OperatorFieldSample) -> String {
    let mut out = String::from("stratum,h,label,lambda_max,dim,operator_norm,hs_norm\n");
    for e in &sample.entries {
        let h: Vec<String> = e.point.h.iter().map(|x| num(*x)).collect();
        out.push_str(&format!(
            "{:?},{},\"{}\",{},{},{},{}\n",
            e.point.stratum,
            h.join(";"),
            e.point.label,
            e.operator.lambda_max,
            e.operator.dim(),
            num(e.operator.operator_norm()),
            num(e.operator.hs_norm()),
        ));
    }
    out
}

#[derive(Serialize)]
struct ReportsFile<'a> {
    scenario: &'a str,
    passed: bool,
    membership: &'a MembershipReport,
}

#[derive(Serialize)]
struct ConvergenceFile<'a> {
    scenario: &'a str,
    queries: &'a [ConvergenceRecord],
}

fn default_parameter(condition: u8) -> &'static str {
    match condition {
        2 => "segment",
        3 => "|mu|",
        4 => "H",
        5 => "|lambda|",
        _ => "parameter",
    }
}

/// One `(parameter, norm)` file per curve of conditions 2–5; a condition
/// without curves gets a header-only file.
pub fn emit_plot_data(dir: &Path, report: &MembershipReport) -> anyhow::Result<Vec<PathBuf>> {
    let curves = dir.join("curves");
    fs::create_dir_all(&curves).with_context(|| format!("creating {}", curves.display()))?;
    let mut written = Vec::new();
    for id in 2..=5u8 {
        let name = condition_name(id);
        let found = report.condition(id).map(|r| r.curves.as_slice()).unwrap_or_default();
        if found.is_empty() {
            let path = curves.join(format!("{name}.csv"));
            write_file(&path, format!("{},norm\n", default_parameter(id)).as_bytes())?;
            written.push(path);
        }
        for (i, c) in found.iter().enumerate() {
            let mut text = format!("{},norm\n", c.parameter);
            for [p, v] in &c.points {
                text.push_str(&format!("{},{}\n", num(*p), num(*v)));
            }
            let path = curves.join(format!("{name}_{i}.csv"));
            write_file(&path, text.as_bytes())?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Writes all artifacts in a fixed order and returns their paths.
pub fn write_artifacts(dir: &Path, outcome: &RunOutcome) -> anyhow::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let norms = dir.join("norms.csv");
    write_file(&norms, norms_csv(&outcome.sample).as_bytes())?;
    written.push(norms);
    let reports = dir.join("reports.json");
    let body = ReportsFile { scenario: &outcome.scenario, passed: outcome.passed(), membership: &outcome.report };
    write_file(&reports, (serde_json::to_string_pretty(&body)? + "\n").as_bytes())?;
    written.push(reports);
    let conv = dir.join("convergence.json");
    let body = ConvergenceFile { scenario: &outcome.scenario, queries: &outcome.convergence };
    write_file(&conv, (serde_json::to_string_pretty(&body)? + "\n").as_bytes())?;
    written.push(conv);
    written.extend(emit_plot_data(dir, &outcome.report)?);
    Ok(written)
}
