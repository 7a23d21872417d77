use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Suite, VerifyConfig};
use crate::suites::{run_suite, Status, SuiteReport};
use crate::CliError;
use gelfand_core::QuasiTriple;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub triple: String,
    pub condition_number: f64,
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs `suites` in parallel; the output order follows `suites`.
pub fn verify(
    label: &str,
    triple: &QuasiTriple,
    suites: &[Suite],
    samples: usize,
    seed: u64,
) -> Report {
    let reports: Vec<SuiteReport> = suites
        .par_iter()
        .map(|&s| run_suite(s, triple, samples, seed))
        .collect();
    Report {
        triple: label.to_string(),
        condition_number: triple.gram().condition_number(),
        samples,
        seed,
        passed: reports.iter().all(|r| r.status == Status::Pass),
        suites: reports,
    }
}

pub fn verify_config(
    cfg: &VerifyConfig,
    seed: Option<u64>,
    env_tol: Option<f64>,
) -> Result<Report, CliError> {
    let (label, triple) = cfg.build_triple(env_tol)?;
    Ok(verify(
        &label,
        &triple,
        &cfg.suites,
        cfg.samples.get(),
        seed.unwrap_or(cfg.seed),
    ))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'a str,
    status: &'a str,
    max_residual: f64,
    tolerance_used: f64,
    checks: usize,
    seed: u64,
    runtime_ms: u64,
}

/// One row per suite.
pub fn write_csv<W: Write>(report: &Report, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for s in &report.suites {
        w.serialize(CsvRow {
            suite: s.name.name(),
            status: match s.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            },
            max_residual: s.max_residual,
            tolerance_used: s.tolerance_used,
            checks: s.checks,
            seed: s.seed,
            runtime_ms: s.runtime_ms,
        })
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
