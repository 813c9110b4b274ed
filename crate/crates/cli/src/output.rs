use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boxworld_core::{scalar, Scalar, Vector};
use clap::ValueEnum;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Sink {
    format: Option<Format>,
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(format: Option<Format>, path: Option<PathBuf>) -> Self {
        Sink { format, path }
    }

    /// Requested format, falling back to the command's default.
    pub fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn require_json(&self) -> Result<()> {
        if self.format == Some(Format::Csv) {
            bail!("this command only writes JSON");
        }
        Ok(())
    }

    pub fn write(&self, text: &str) -> Result<()> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.path {
            Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(stdout.flush()?)
            }
        }
    }

    pub fn json(&self, value: &Value) -> Result<()> {
        self.write(&serde_json::to_string_pretty(value)?)
    }
}

pub fn q(value: &Scalar) -> Value {
    Value::String(scalar::format(value))
}

pub fn vector(v: &Vector) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn csv_vector(v: &Vector) -> String {
    v.iter().map(scalar::format).collect::<Vec<_>>().join(",")
}
