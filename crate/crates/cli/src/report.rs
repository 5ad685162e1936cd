use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "hullcert-report/1";

/// Envelope shared by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub passed: bool,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, passed: bool, result: impl Serialize) -> Report {
        Report {
            schema: SCHEMA,
            command,
            passed,
            result: serde_json::to_value(result).expect("report values serialize"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }
}
