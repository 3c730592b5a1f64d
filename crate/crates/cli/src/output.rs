use std::collections::BTreeMap;
use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything that determines a command's output.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mechanism: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.to_string(), value.to_string());
        self
    }

    /// One-line rendering for comment headers.
    pub fn summary(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    result: &'a T,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn header() -> String {
    format!("impartial {VERSION}")
}

pub fn json<T: Serialize>(config: &RunConfig, passed: Option<bool>, result: &T) -> io::Result<()> {
    let env = Envelope {
        tool: "impartial",
        version: VERSION,
        config,
        passed,
        result,
    };
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &env)?;
    writeln!(out)
}

/// CSV preceded by `#` lines with the version and config. Decimal columns are
/// rounded to 12 digits.
pub fn csv(config: &RunConfig, passed: Option<bool>, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "# {}", self::header())?;
    writeln!(out, "# config {}", config.summary())?;
    if let Some(p) = passed {
        writeln!(out, "# passed {p}")?;
    }
    let mut w = ::csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}

/// Two-column `key,value` CSV for reports without a natural table.
pub fn csv_pairs(config: &RunConfig, passed: Option<bool>, pairs: &[(&str, String)]) -> io::Result<()> {
    let rows: Vec<Vec<String>> = pairs.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
    csv(config, passed, &["key", "value"], &rows)
}
