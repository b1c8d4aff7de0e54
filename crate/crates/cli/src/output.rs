//! Deterministic file emission: RFC-4180 CSV with 17-significant-digit
//! numbers, JSON documents with version and config hash up front.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits: lossless round trip for f64.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn header_comment(config_hash: &str) -> String {
    format!("# bcsgap {TOOL_VERSION} config={config_hash}")
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Write a CSV file: one comment line recording tool version and config hash,
/// a header row, then the numeric rows.
pub fn write_csv(
    path: &PathBuf,
    config_hash: &str,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "{}", header_comment(config_hash))?;
    writeln!(file, "{}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        writeln!(file, "{}", cells.join(","))?;
    }
    file.flush()?;
    Ok(())
}

/// Write a pretty-printed JSON document.
pub fn write_json<T: Serialize>(path: &PathBuf, doc: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    fs::write(path, text + "\n")?;
    Ok(())
}
