use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// One pass/fail judgement and the threshold it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: Value,
    pub threshold: String,
    pub pass: bool,
}

impl Verdict {
    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value: value.into(),
            threshold: format!("[{lo}, {hi}]"),
            pass: value >= lo && value <= hi,
        }
    }

    pub fn at_least(name: &str, value: f64, lo: f64) -> Self {
        Self {
            name: name.into(),
            value: value.into(),
            threshold: format!(">= {lo}"),
            pass: value >= lo,
        }
    }

    pub fn at_most(name: &str, value: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value: value.into(),
            threshold: format!("<= {hi}"),
            pass: value <= hi,
        }
    }

    pub fn below(name: &str, value: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value: value.into(),
            threshold: format!("< {hi}"),
            pass: value < hi,
        }
    }

    pub fn expect<V: Serialize + PartialEq>(name: &str, value: V, expected: V) -> Self {
        Self {
            name: name.into(),
            pass: value == expected,
            value: serde_json::to_value(&value).unwrap_or(Value::Null),
            threshold: format!("== {}", serde_json::to_value(&expected).unwrap_or(Value::Null)),
        }
    }
}

/// Outcome of one subcommand, written as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub seed: u64,
    pub config: Value,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub outputs: Vec<String>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: Value, timestamp: bool) -> Self {
        let timestamp = timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Self {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
            seed,
            config,
            results: Value::Null,
            verdicts: Vec::new(),
            outputs: Vec::new(),
            pass: true,
        }
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.pass &= v.pass;
        self.verdicts.push(v);
    }
}

/// Output directory that records every file written into it.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.into());
        Ok(())
    }

    /// Writes the report last, listing the other files.
    pub fn finish(mut self, mut report: Report) -> Result<Report> {
        report.outputs = std::mem::take(&mut self.written);
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        self.write("report.json", json.as_bytes())?;
        Ok(report)
    }
}
