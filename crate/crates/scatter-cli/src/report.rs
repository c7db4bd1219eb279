use std::fmt::Display;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

/// A failure that ends the command with exit code 2.
#[derive(Debug)]
pub struct Fail {
    pub reason: &'static str,
    pub detail: String,
}

impl Fail {
    pub fn parse(e: impl Display) -> Self {
        Fail { reason: "parse", detail: e.to_string() }
    }

    pub fn io(path: &Path, e: impl Display) -> Self {
        Fail { reason: "io", detail: format!("{}: {e}", path.display()) }
    }

    pub fn invalid(e: impl Display) -> Self {
        Fail { reason: "invalid", detail: e.to_string() }
    }

    pub fn record(&self) -> Value {
        json!({ "error": self.reason, "detail": self.detail })
    }
}

/// How a successful command ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    CheckFailed,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::CheckFailed
        }
    }

    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::CheckFailed => 1,
        }
    }
}

pub type CmdResult = Result<Outcome, Fail>;

/// Print one NDJSON record.
pub fn emit(v: &impl Serialize) {
    println!("{}", serde_json::to_string(v).expect("serializable record"));
}

pub fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::io(path, e))
}

pub fn write(path: &Path, body: &str) -> Result<(), Fail> {
    std::fs::write(path, body).map_err(|e| Fail::io(path, e))
}
