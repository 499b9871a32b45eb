use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parameters of one invocation, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_y: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_y: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_values: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeats: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub engine_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(command: &str, time: f64) -> Self {
        Self {
            command: command.to_owned(),
            order: None,
            order_y: None,
            nodes: None,
            nodes_y: None,
            lambdas: Vec::new(),
            m: None,
            dx: None,
            time,
            gamma: None,
            boundary: None,
            n_values: Vec::new(),
            repeats: None,
            seed: None,
            engine_version: format!("ctqw-core {}", ctqw_core::VERSION),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }
}

/// Writes into a temporary file in the target directory, then renames it
/// into place so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_error(path, e))?;
    tmp.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Engine(format!("cannot write {}: {e}", path.display()))
}

/// CSV with one header row; floats are written as shortest round-trip decimals.
pub fn csv_bytes<R: Serialize>(
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Engine(format!("csv: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Engine(format!("csv: {e}")))
}

pub fn write_csv<R: Serialize>(
    out: &Path,
    name: &str,
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> Result<PathBuf, CliError> {
    let path = out.join(name);
    write_atomic(&path, &csv_bytes(header, rows)?)?;
    Ok(path)
}

pub fn write_json<T: Serialize>(out: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let path = out.join(name);
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Engine(format!("json: {e}")))?;
    bytes.push(b'\n');
    write_atomic(&path, &bytes)?;
    Ok(path)
}

pub fn ensure_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)
        .map_err(|e| CliError::Engine(format!("cannot create {}: {e}", out.display())))
}
