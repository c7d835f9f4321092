//! File writers shared by the subcommands. Every number is printed with 17
//! significant digits and every JSON document has a fixed key order, so
//! identical configurations produce byte-identical artifacts.

use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Serialize)]
pub struct Metadata<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub derived: serde_json::Value,
}

pub fn write_metadata(dir: &Path, meta: &Metadata) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(meta)
        .map_err(|e| CliError::Invalid(format!("metadata: {e}")))?;
    write_bytes(&dir.join("metadata.json"), text.as_bytes())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    write_bytes(path, text.as_bytes())
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", dir.display())))
}

/// Two-column CSV of f64 pairs with a header, 17 significant digits.
pub fn csv_pairs(header: &str, rows: impl Iterator<Item = (f64, f64)>) -> Vec<u8> {
    use std::io::Write as _;
    let mut out = Vec::new();
    let _ = writeln!(out, "{header}");
    for (a, b) in rows {
        let _ = writeln!(out, "{a:.16e},{b:.16e}");
    }
    out
}
