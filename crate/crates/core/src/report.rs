//! Versioned, deterministic JSON reports.

use serde::Serialize;
use serde_json::Value;

use crate::catalog::SCHEMA;
use crate::error::Error;

/// One named verification with an optional witness on failure.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check { name: name.into(), ok: true, witness: None, data: Value::Null }
    }

    pub fn new(name: impl Into<String>, ok: bool, witness: Option<String>) -> Check {
        Check { name: name.into(), ok, witness: if ok { None } else { witness }, data: Value::Null }
    }

    pub fn from_error(name: impl Into<String>, e: &Error) -> Check {
        Check { name: name.into(), ok: false, witness: Some(e.to_string()), data: Value::Null }
    }

    pub fn with_data(mut self, data: impl Serialize) -> Check {
        self.data = serde_json::to_value(data).unwrap_or(Value::Null);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub params: Value,
    pub seed: u64,
    pub ok: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, params: Value, seed: u64, checks: Vec<Check>) -> Report {
        let ok = !checks.is_empty() && checks.iter().all(|c| c.ok);
        Report { schema: SCHEMA, suite: suite.into(), params, seed, ok, checks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
