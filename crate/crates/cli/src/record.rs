use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use eddeg_core::homotopy::TrackerConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Mismatch,
    Degenerate,
    Failure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Mismatch => 1,
            Status::Degenerate => 2,
            Status::Failure => 3,
        }
    }

    /// The more severe of two outcomes.
    pub fn worst(self, other: Status) -> Status {
        if other.exit_code() > self.exit_code() {
            other
        } else {
            self
        }
    }
}

/// One persisted result line.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub input_digest: String,
    pub engine: String,
    pub prime: Option<u64>,
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<TrackerConfig>,
    pub counts: BTreeMap<String, u64>,
    pub defect: Option<i64>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
    pub wall_seconds: f64,
    pub version: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl RunRecord {
    pub fn new(command: &str, input: &[u8], engine: &str) -> Self {
        Self {
            command: command.into(),
            input_digest: digest(input),
            engine: engine.into(),
            prime: None,
            seeds: Vec::new(),
            tolerances: None,
            counts: BTreeMap::new(),
            defect: None,
            detail: serde_json::Value::Null,
            wall_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").into(),
            status: Status::Pass,
            message: None,
        }
    }

    pub fn count(mut self, key: &str, value: u64) -> Self {
        self.counts.insert(key.into(), value);
        self
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Appends records as JSON lines to `dir/runs.jsonl`.
pub fn persist(dir: &Path, records: &[RunRecord]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut file = OpenOptions::new().create(true).append(true).open(dir.join("runs.jsonl"))?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).expect("records serialize"));
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())
}
