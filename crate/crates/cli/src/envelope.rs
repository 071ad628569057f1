use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// The single JSON object written by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub constants_used: Option<ConstantsUsed>,
    pub tool_version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsUsed {
    pub u_star: f64,
    pub m_star: f64,
    pub tolerance: f64,
}

impl OutputEnvelope {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            constants_used: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(key.to_string(), to_value(value));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.to_string(), to_value(value));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope values are finite")
    }

    /// Two-column `key  value` listing; nested values are printed as compact JSON.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("command".into(), self.command.clone()),
            ("tool_version".into(), self.tool_version.clone()),
        ];
        for (k, v) in &self.inputs {
            rows.push((format!("inputs.{k}"), plain(v)));
        }
        if let Some(c) = &self.constants_used {
            rows.push(("constants_used.u_star".into(), format!("{:?}", c.u_star)));
            rows.push(("constants_used.m_star".into(), format!("{:?}", c.m_star)));
            rows.push(("constants_used.tolerance".into(), format!("{:?}", c.tolerance)));
        }
        for (k, v) in &self.results {
            rows.push((format!("results.{k}"), plain(v)));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v}").unwrap();
        }
        out
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("value serializes to JSON")
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
