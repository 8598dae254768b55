use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case1_budget: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_slack: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub parameters: Parameters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answer: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_st: Option<Option<usize>>,
    pub elapsed_ms: u64,
    pub dp_states_touched: u64,
    pub sieve_queries_issued: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Parameters) -> Self {
        RunReport {
            command: command.to_string(),
            input_digest: None,
            parameters,
            answer: None,
            dist_st: None,
            elapsed_ms: 0,
            dp_states_touched: 0,
            sieve_queries_issued: 0,
            error: None,
        }
    }

    pub fn finish(&mut self, started: Instant) {
        self.elapsed_ms = started.elapsed().as_millis() as u64;
    }

    pub fn fail(&mut self, kind: &str, message: String) {
        self.answer = None;
        self.dist_st = None;
        self.error = Some(ErrorInfo {
            kind: kind.to_string(),
            message,
        });
    }

    pub fn exit_code(&self) -> i32 {
        match (self.answer, &self.error) {
            (_, Some(_)) => 2,
            (Some(true), None) => 0,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
