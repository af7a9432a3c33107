//! Reading numeric input files.
//!
//! A file holds one number per line, or a single-column CSV whose first
//! content line may be a header. Blank lines and lines starting with `#` are
//! skipped. Line numbers in errors are 1-based and count every line.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use tlqe::Dataset;

use crate::CliError;

/// SHA-256 of the raw input bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub algorithm: &'static str,
    pub hex: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            algorithm: "sha256",
            hex: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

/// A parsed value and the line it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumberAt {
    pub line: usize,
    pub value: f64,
}

fn looks_like_header(s: &str) -> bool {
    s.starts_with(|c: char| c.is_alphabetic() || c == '"' || c == '\'')
}

/// Parse numeric content; `source` names the input in messages.
pub fn parse_numbers(text: &str, source: &str) -> Result<Vec<NumberAt>, CliError> {
    let mut out = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        let field = s.strip_suffix(',').unwrap_or(s).trim();
        if field.contains(',') {
            return Err(CliError::Data(format!(
                "{source}: parse error at line {line}: expected a single column, got '{s}'"
            )));
        }
        match field.parse::<f64>() {
            Ok(value) => out.push(NumberAt { line, value }),
            Err(_) if first && looks_like_header(field) => {}
            Err(_) => {
                return Err(CliError::Data(format!(
                    "{source}: parse error at line {line}: '{field}' is not a number"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Data(format!(
            "{source}: parse error: empty dataset"
        )));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<(String, InputDigest), CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let digest = InputDigest::of(path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Data(format!("{}: file is not valid UTF-8", path.display())))?;
    Ok((text, digest))
}

/// Lifetimes: every value must be positive and finite.
pub fn parse_dataset(text: &str, source: &str) -> Result<Dataset<f64>, CliError> {
    let numbers = parse_numbers(text, source)?;
    if let Some(bad) = numbers
        .iter()
        .find(|n| !(n.value.is_finite() && n.value > 0.0))
    {
        return Err(CliError::Data(format!(
            "{source}: value error at line {}: {} is not a positive finite lifetime",
            bad.line, bad.value
        )));
    }
    let values = numbers.into_iter().map(|n| n.value).collect();
    Dataset::new(values).map_err(|e| CliError::Data(format!("{source}: {e}")))
}

pub fn read_dataset(path: &Path) -> Result<(Dataset<f64>, InputDigest), CliError> {
    let (text, digest) = read(path)?;
    Ok((parse_dataset(&text, &path.display().to_string())?, digest))
}

/// Uniform variates in [0, 1).
pub fn read_uniforms(path: &Path) -> Result<(Vec<f64>, InputDigest), CliError> {
    let (text, digest) = read(path)?;
    let source = path.display().to_string();
    let numbers = parse_numbers(&text, &source)?;
    if let Some(bad) = numbers.iter().find(|n| !(0.0..1.0).contains(&n.value)) {
        return Err(CliError::Data(format!(
            "{source}: domain error at line {}: uniform {} lies outside [0, 1)",
            bad.line, bad.value
        )));
    }
    Ok((numbers.into_iter().map(|n| n.value).collect(), digest))
}
