//! The JSON run report every subcommand emits on stdout.
//!
//! Reports are deterministic for fixed flags: map keys are sorted, struct
//! fields serialize in declaration order, and the only varying field is
//! `elapsed`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "partial")]
    Partial,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub results: Value,
    pub status: Status,
    pub elapsed: f64,
}

pub struct ReportBuilder {
    command: String,
    params: BTreeMap<String, Value>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(command: &str) -> ReportBuilder {
        ReportBuilder {
            command: command.to_string(),
            params: BTreeMap::new(),
            start: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("param serializes"),
        );
        self
    }

    pub fn finish(self, results: impl Serialize, status: Status) -> RunReport {
        RunReport {
            schema: 1,
            command: self.command,
            params: self.params,
            results: serde_json::to_value(results).expect("results serialize"),
            status,
            elapsed: self.start.elapsed().as_secs_f64(),
        }
    }
}

impl RunReport {
    /// Print to stdout and translate the status into the process exit code:
    /// 0 pass, 1 contract/claim failure or partial.
    pub fn emit(self) -> i32 {
        println!(
            "{}",
            serde_json::to_string_pretty(&self).expect("report serializes")
        );
        match self.status {
            Status::Pass => 0,
            _ => 1,
        }
    }
}
