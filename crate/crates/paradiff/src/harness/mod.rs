//! Experiment harness: configuration, suites and CSV output.

pub mod config;
pub mod output;
pub mod suites;

pub use config::{ExperimentConfig, SUITES};
pub use suites::{run_suite, Check, Cmp, SuiteReport};

use crate::error::{Error, Result};
use std::path::Path;

/// Process exit codes of the CLI.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Exit code for the outcome of a run.
pub fn exit_code(outcome: &Result<SuiteReport>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => EXIT_PASS,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(Error::Config(_)) => EXIT_CONFIG,
        Err(_) => EXIT_RUNTIME,
    }
}

/// Runs a suite and writes its tables and `report.txt` into `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<SuiteReport> {
    cfg.validate()?;
    let report = run_suite(cfg)?;
    std::fs::create_dir_all(out_dir)?;
    for t in &report.tables {
        output::emit_table(out_dir, t)?;
    }
    std::fs::write(out_dir.join("report.txt"), report.text())?;
    Ok(report)
}
