use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use etale_twist::report::ValidationReport;

use crate::error::{CliError, Failure};
use crate::GlobalArgs;

/// A file read or written by a command, with its SHA-256 digest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub schema: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &str, schema: &str, bytes: &[u8]) -> Self {
        Self { path: path.into(), schema: schema.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

/// Everything one invocation did, in a fixed key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub steps: Vec<ValidationReport>,
    pub result: Option<Value>,
    pub outputs: Vec<InputDigest>,
    pub error: Option<Failure>,
    pub exit: i32,
    /// Human-readable summary lines.
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            steps: Vec::new(),
            result: None,
            outputs: Vec::new(),
            error: None,
            exit: 0,
            lines: Vec::new(),
        }
    }

    pub fn fail(&mut self, e: &CliError) {
        if self.result.is_none() {
            if let Some(r) = e.partial_report() {
                self.result = serde_json::to_value(r).ok();
            }
        }
        self.error = Some(e.failure());
        self.exit = e.exit_code();
    }

    /// What `--json` prints: the result, or the failure with any partial result.
    pub fn payload(&self) -> Value {
        match (&self.error, &self.result) {
            (None, Some(r)) => r.clone(),
            (None, None) => Value::Object(Map::new()),
            (Some(f), r) => {
                let mut m = Map::new();
                m.insert("error".into(), serde_json::to_value(f).expect("plain data"));
                if let Some(r) = r {
                    m.insert("result".into(), r.clone());
                }
                Value::Object(m)
            }
        }
    }
}

pub(crate) fn emit(report: &RunReport, global: &GlobalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Write { path: "<stdout>".into(), source: e };
    if global.json {
        let text = serde_json::to_string(&report.payload()).expect("plain data");
        writeln!(out, "{text}").map_err(io)?;
    } else {
        for line in &report.lines {
            writeln!(out, "{line}").map_err(io)?;
        }
        if let Some(f) = &report.error {
            writeln!(err, "error [{}]: {}", f.code, f.message).map_err(io)?;
        }
    }
    if let Some(path) = &global.report {
        let text = serde_json::to_string_pretty(report).expect("plain data") + "\n";
        std::fs::write(path, text).map_err(|e| CliError::Write { path: path.display().to_string(), source: e })?;
    }
    Ok(())
}
