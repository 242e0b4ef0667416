//! Experiment harness behind the `helmstab` binary. Every subcommand reads a
//! flat `key = value` configuration (file plus command-line overrides) and
//! returns its output as text, so runs are reproducible byte for byte.

pub mod calibrate;
pub mod direct;
pub mod far2near;
pub mod geometry;
pub mod hankel;
pub mod instability;
pub mod modal;
pub mod table;

use helmstab::config::{ConfigError, KeyValues};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration or arguments; exit code 2.
    #[error("{0}")]
    Schema(String),
    /// A computation failed; exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub(crate) fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

pub(crate) fn schema(e: impl std::fmt::Display) -> CliError {
    CliError::Schema(e.to_string())
}

/// Result of a subcommand: the main text output, extra files to write, and
/// whether every hypothesis or check held (for `--strict`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub files: Vec<(PathBuf, String)>,
    pub all_ok: bool,
    /// Human-readable reasons behind `all_ok == false`.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Self {
            text,
            all_ok: true,
            ..Default::default()
        }
    }

    /// Write the extra files, then the text to `out` or stdout.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        for (path, body) in &self.files {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, body)?;
        }
        match out {
            Some(p) => std::fs::write(p, &self.text)?,
            None => print!("{}", self.text),
        }
        Ok(())
    }
}

/// Configuration file contents (or nothing) plus `key=value` overrides.
pub fn load_config(
    file: Option<&Path>,
    overrides: &[(String, String)],
    schema: &[helmstab::config::KeySpec],
) -> Result<KeyValues, CliError> {
    let text = match file {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Schema(format!("cannot read config {}: {e}", p.display())))?,
        None => String::new(),
    };
    let mut kv = KeyValues::parse(&text, schema)?;
    for (k, v) in overrides {
        kv.set(k, v)?;
    }
    Ok(kv)
}

/// Split a `key=value` override.
pub fn parse_override(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected key=value, got '{s}'"))
}
