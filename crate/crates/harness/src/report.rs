//! JSON reports, the summary CSV and the timing sidecar.

use std::fs;
use std::io;
use std::path::Path;

use artin_core::policy::TruncationPolicy;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::CheckKind;

pub const ARTIFACT_VERSION: &str = concat!("artin-harness/", env!("CARGO_PKG_VERSION"));
/// Version of the canonical term and class ordering used by every reduction.
pub const ORDERING_VERSION: &str = "canonical-order/1";

pub const SUMMARY_FILE: &str = "summary.csv";
pub const TIMINGS_FILE: &str = "timings.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }

    pub fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub check: CheckKind,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub terms: usize,
    pub policy: TruncationPolicy,
    pub details: Value,
    /// Extra CSV tables written next to the report, as `(file suffix, contents)`.
    pub tables: Vec<(String, String)>,
    pub wall_ms: u128,
}

impl CheckOutcome {
    pub fn error(check: CheckKind, policy: TruncationPolicy, message: impl std::fmt::Display) -> Self {
        CheckOutcome {
            check,
            status: Status::Error,
            residual: None,
            tolerance: None,
            terms: 0,
            policy,
            details: json!({ "error": message.to_string() }),
            tables: Vec::new(),
            wall_ms: 0,
        }
    }
}

pub fn cx(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn policy_json(p: &TruncationPolicy) -> Value {
    json!({ "bound": p.bound, "cutoff": p.cutoff, "norm_cutoff": p.norm_cutoff, "quad_tol": p.quad_tol })
}

/// Shortest round-trip scientific notation, or empty for a missing value.
pub fn sci(x: Option<f64>) -> String {
    x.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn report_json(scenario: &str, o: &CheckOutcome) -> Value {
    json!({
        "artifact_version": ARTIFACT_VERSION,
        "ordering_version": ORDERING_VERSION,
        "scenario": scenario,
        "check": o.check.name(),
        "status": o.status,
        "residual": o.residual,
        "tolerance": o.tolerance,
        "terms": o.terms,
        "policy": policy_json(&o.policy),
        "details": o.details,
    })
}

/// Writes one JSON report per check, their tables, the summary CSV and the
/// timing sidecar. Everything except the sidecar is independent of timing
/// and thread count.
pub fn write_all(out_dir: &Path, scenario: &str, outcomes: &[CheckOutcome]) -> io::Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut summary = csv::Writer::from_writer(Vec::new());
    let mut timings = csv::Writer::from_writer(Vec::new());
    summary.write_record(["scenario", "check", "status", "residual", "tolerance", "terms", "wall_ms"])?;
    timings.write_record(["scenario", "check", "wall_ms"])?;
    for o in outcomes {
        let name = o.check.name();
        let mut text = serde_json::to_string_pretty(&report_json(scenario, o)).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(out_dir.join(format!("{scenario}.{name}.json")), text)?;
        for (suffix, contents) in &o.tables {
            fs::write(out_dir.join(format!("{scenario}.{name}.{suffix}.csv")), contents)?;
        }
        // wall_ms is left empty here and recorded in the sidecar
        summary.write_record([
            scenario,
            name,
            o.status.as_str(),
            &sci(o.residual),
            &sci(o.tolerance),
            &o.terms.to_string(),
            "",
        ])?;
        timings.write_record([scenario, name, &o.wall_ms.to_string()])?;
    }
    fs::write(out_dir.join(SUMMARY_FILE), summary.into_inner().map_err(|e| io::Error::other(e.to_string()))?)?;
    fs::write(out_dir.join(TIMINGS_FILE), timings.into_inner().map_err(|e| io::Error::other(e.to_string()))?)?;
    Ok(())
}
