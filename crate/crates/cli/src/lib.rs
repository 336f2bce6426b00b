//! Experiment runner: a JSON configuration in, a CSV result table and a JSON
//! provenance sidecar out.

// negated comparisons are how NaN arguments get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::{Experiment, ExperimentConfig, GridConfig};
pub use experiments::{run_experiment, Report, RunFailure};
pub use output::{RawRecord, ResultRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("{0}")]
    Io(String),
    #[error("run failed after {rows} rows: {error}")]
    Run { error: brbm_core::Error, rows: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use brbm_core::Error as E;
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 1,
            CliError::Run { error, .. } => match error {
                E::Guard { .. } => 3,
                E::Numerical(_) | E::Stability(_) | E::FrontAtEdge { .. } => 4,
                E::Domain(_) | E::Contract(_) | E::UnknownId(_) => 2,
            },
        }
    }
}

/// Where the result table goes: the command line wins over the config,
/// then `<experiment>.csv`.
pub fn output_path(cfg: &ExperimentConfig, out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| cfg.output_path.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.experiment.map_or("results", |e| e.name()))))
}

/// Validate, run and write one experiment. Partial results are written
/// (and flagged in the sidecar) before a run error is returned.
pub fn execute(experiment: Experiment, mut cfg: ExperimentConfig, seed: Option<u64>, out: Option<PathBuf>) -> Result<Report, CliError> {
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate(experiment)?;
    let path = output_path(&cfg, out);
    cfg.output_path = Some(path.clone());
    match run_experiment(&cfg) {
        Ok(report) => {
            write_all(&path, &cfg, &report, "complete")?;
            Ok(report)
        }
        Err(RunFailure { partial, error }) => {
            write_all(&path, &cfg, &partial, &format!("partial: {error}"))?;
            Err(CliError::Run {
                error,
                rows: partial.rows.len(),
            })
        }
    }
}

fn write_all(path: &Path, cfg: &ExperimentConfig, report: &Report, status: &str) -> Result<(), CliError> {
    output::write_rows(path, &report.rows)?;
    if cfg.export_raw && !report.raw.is_empty() {
        output::write_raw(&output::raw_path(path), &report.raw)?;
    }
    output::write_sidecar(&output::sidecar_path(path), cfg, status, report.rows.len())
}
