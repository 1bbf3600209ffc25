//! Series files, fraction literals and run manifests.
//!
//! Series files hold one integer per line (LF, UTF-8). A single leading
//! header line is skipped when it is not a number.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Result, RinarError};
use crate::fraction::Fraction;
use crate::stats::CountSeries;

fn normalize_minus(s: &str) -> String {
    s.replace('\u{2212}', "-")
}

fn looks_numeric(s: &str) -> bool {
    normalize_minus(s).parse::<f64>().is_ok()
}

/// Parses series text. Line numbers in errors are 1-based.
pub fn parse_series(text: &str) -> Result<CountSeries> {
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .collect();
    while lines.last().is_some_and(|(_, l)| l.is_empty()) {
        lines.pop();
    }
    if let Some((_, first)) = lines.first() {
        if !first.is_empty() && !looks_numeric(first) {
            lines.remove(0);
        }
    }
    if lines.is_empty() {
        return Err(RinarError::InvalidArgument("series file has no values".into()));
    }
    let values = lines
        .into_iter()
        .map(|(line, token)| {
            normalize_minus(token)
                .parse::<i64>()
                .map_err(|_| RinarError::Parse {
                    line,
                    message: format!("expected an integer, found {token:?}"),
                })
        })
        .collect::<Result<Vec<i64>>>()?;
    CountSeries::new(values)
}

pub fn read_series_csv(path: impl AsRef<Path>) -> Result<CountSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| RinarError::Io(format!("{}: {e}", path.display())))?;
    parse_series(&text)
}

/// One integer per line, LF-terminated, with an optional header line.
pub fn format_series(series: &CountSeries, header: Option<&str>) -> String {
    let mut out = String::with_capacity(series.len() * 3);
    if let Some(h) = header {
        out.push_str(h);
        out.push('\n');
    }
    for v in series.values() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

pub fn write_series_csv(
    series: &CountSeries,
    path: impl AsRef<Path>,
    header: Option<&str>,
) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path)
        .map_err(|e| RinarError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(format_series(series, header).as_bytes())?;
    Ok(())
}

pub fn parse_fraction(text: &str) -> Result<Fraction> {
    text.parse()
}

/// Comma-separated fraction literals, e.g. `3/25,3/8,1/5,-1/4`.
pub fn parse_fraction_list(text: &str) -> Result<Vec<Fraction>> {
    text.split(',').map(|t| parse_fraction(t.trim())).collect()
}

/// Everything needed to re-derive an output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub options: serde_json::Value,
    pub seeds: Vec<u64>,
    /// Input path to SHA-256 hex digest.
    pub input_digests: BTreeMap<String, String>,
    pub version: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, options: serde_json::Value) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            options,
            seeds: Vec::new(),
            input_digests: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seeds.push(seed);
        self
    }

    pub fn with_input(mut self, path: &Path) -> Result<Self> {
        let digest = file_digest(path)?;
        self.input_digests.insert(path.display().to_string(), digest);
        Ok(self)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| RinarError::Io(format!("manifest serialization: {e}")))?;
        fs::write(path, json + "\n")
            .map_err(|e| RinarError::Io(format!("{}: {e}", path.display())))
    }
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| RinarError::Io(format!("{}: {e}", path.display())))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}
