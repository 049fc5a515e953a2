//! Batch driver around `cflab-core`: one subcommand per run, a CSV table
//! named after the subcommand and a `manifest.json` next to it.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{execute, Outcome, Subcommand, Table};
pub use config::{ExperimentConfig, FieldSpec, Overrides};
pub use error::{CliError, Result};

use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Outputs were written but the solver hit its sweep limit.
    Nonconverged,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub config: ExperimentConfig,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<String>,
    pub status: Status,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Nonconverged => 4,
        }
    }
}

pub fn write_csv(path: &Path, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Runs one subcommand and writes `<subcommand>.csv` and the manifest into
/// `config.out`. Nothing is written if the computation fails.
pub fn run(sub: Subcommand, config: &ExperimentConfig) -> Result<RunManifest> {
    let start = Instant::now();
    let outcome = execute(sub, config)?;
    let dir: &PathBuf = &config.out;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let csv_name = format!("{}.csv", sub.name());
    write_csv(&dir.join(&csv_name), &outcome.table)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        subcommand: sub.name(),
        config: config.clone(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: vec![csv_name],
        status: if outcome.converged {
            Status::Ok
        } else {
            Status::Nonconverged
        },
        warnings: outcome.warnings,
    };
    let path = dir.join(MANIFEST_NAME);
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(manifest)
}
