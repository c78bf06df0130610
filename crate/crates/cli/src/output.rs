//! CSV and JSON sidecar writers.
//!
//! CSV bodies are deterministic: 17-significant-digit scientific floats,
//! comma separators, LF line endings, no timestamps. Run metadata
//! (including the generation time) lives in the JSON sidecar only.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use dicke::variational::VariationalSolution;
use num_complex::Complex64;
use serde_json::json;

use crate::CliError;

/// Bit-stable float cell: 17 significant digits, scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Human-friendly complex value for terminal output.
pub fn complex_display(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{} - {}i", z.re, -z.im)
    } else {
        format!("{} + {}i", z.re, z.im)
    }
}

/// One CSV file accumulated in memory, then written atomically.
pub struct CsvFile {
    pub name: String,
    header: String,
    rows: Vec<String>,
}

impl CsvFile {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        CsvFile { name: name.into(), header: columns.join(","), rows: Vec::new() }
    }

    pub fn push_row(&mut self, cells: &[String]) {
        self.rows.push(cells.join(","));
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let mut body = String::with_capacity((self.rows.len() + 1) * 64);
        body.push_str(&self.header);
        body.push('\n');
        for row in &self.rows {
            body.push_str(row);
            body.push('\n');
        }
        let path = dir.join(&self.name);
        fs::write(&path, body)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        Ok(path)
    }
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn pretty_json(body: &serde_json::Value) -> Result<String, CliError> {
    serde_json::to_string_pretty(body).map_err(|e| CliError::Io(format!("encoding JSON: {e}")))
}

pub fn write_sidecar(
    dir: &Path,
    name: &str,
    body: &serde_json::Value,
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut text = pretty_json(body)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

pub fn solution_json(s: &VariationalSolution) -> serde_json::Value {
    json!({
        "phase": s.phase.label(),
        "gamma_c": s.gamma_c,
        "n_p": s.n_p,
        "energy": {"re": s.energy.re, "im": s.energy.im},
        "delta_na": s.delta_na,
        "berry_per_atom": s.berry_per_atom,
        "stability": s.stability,
    })
}
