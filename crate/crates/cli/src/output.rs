use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::config::ExperimentConfig;
use crate::CliError;

/// One line of the result table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub params: String,
    pub statistic: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub n: Option<usize>,
    pub wall_time: f64,
}

/// One genealogy node of one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RawRecord {
    pub horizon: f64,
    pub replicate_id: u64,
    pub particle_id: usize,
    pub parent_id: Option<usize>,
    pub birth_time: f64,
    pub split_time: f64,
    pub endpoint_position: f64,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    version: &'a str,
    status: &'a str,
    rows: usize,
    config: &'a ExperimentConfig,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

pub fn raw_path(out: &Path) -> PathBuf {
    out.with_extension("raw.csv")
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Write `contents` through a temporary file in the target directory and
/// rename it into place.
fn atomic_write(path: &Path, fill: impl FnOnce(&mut NamedTempFile) -> Result<(), CliError>) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| io(path, e))?;
    fill(&mut tmp)?;
    tmp.as_file_mut().flush().map_err(|e| io(path, e))?;
    tmp.persist(path).map_err(|e| io(path, e))?;
    Ok(())
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    atomic_write(path, |tmp| {
        let mut w = csv::Writer::from_writer(tmp.as_file_mut());
        for row in rows {
            w.serialize(row).map_err(|e| io(path, e))?;
        }
        w.flush().map_err(|e| io(path, e))
    })
}

pub fn write_rows(path: &Path, rows: &[ResultRow]) -> Result<(), CliError> {
    if rows.is_empty() {
        // the csv writer only emits a header together with a record
        return atomic_write(path, |tmp| {
            writeln!(tmp, "experiment,params,statistic,value,std_error,n,wall_time").map_err(|e| io(path, e))
        });
    }
    write_csv(path, rows)
}

pub fn write_raw(path: &Path, records: &[RawRecord]) -> Result<(), CliError> {
    write_csv(path, records)
}

pub fn write_sidecar(path: &Path, config: &ExperimentConfig, status: &str, rows: usize) -> Result<(), CliError> {
    let doc = Sidecar {
        version: env!("CARGO_PKG_VERSION"),
        status,
        rows,
        config,
    };
    atomic_write(path, |tmp| {
        serde_json::to_writer_pretty(tmp.as_file_mut(), &doc).map_err(|e| io(path, e))?;
        writeln!(tmp).map_err(|e| io(path, e))
    })
}
