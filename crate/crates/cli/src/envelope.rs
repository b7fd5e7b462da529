//! The JSON envelope and the exit-code scheme.

use qsimplex::error::Error;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_MEMBER: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_MEMBER: u8 = 3;
pub const EXIT_DISAGREEMENT: u8 = 4;
pub const EXIT_NOT_FOUND: u8 = 5;
pub const EXIT_BUDGET: u8 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorBody {
    fn from(e: &Error) -> Self {
        Self {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidQuery(_)
        | Error::ParseRational { .. }
        | Error::BadDimension(_)
        | Error::ZeroInput
        | Error::PreconditionViolated(_) => EXIT_USAGE,
        Error::Disagreement(_) => EXIT_DISAGREEMENT,
        Error::NotFoundWithinBounds => EXIT_NOT_FOUND,
        Error::BudgetExceeded { .. } | Error::FactorizationTimeout { .. } => EXIT_BUDGET,
        _ => EXIT_FAILURE,
    }
}

/// Everything a command produced: the machine-readable payload or error, the
/// human-readable text and the exit code.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub outcome: std::result::Result<Value, ErrorBody>,
    pub text: String,
    pub exit: u8,
}

impl Report {
    pub fn ok(command: &'static str, input: Value, result: Value, text: String, exit: u8) -> Self {
        Self {
            command,
            input,
            outcome: Ok(result),
            text,
            exit,
        }
    }

    pub fn error(command: &'static str, input: Value, body: ErrorBody, exit: u8) -> Self {
        let text = format!("error: {}", body.message);
        Self {
            command,
            input,
            outcome: Err(body),
            text,
            exit,
        }
    }

    pub fn from_error(command: &'static str, input: Value, e: &Error) -> Self {
        Self::error(command, input, e.into(), exit_code_for(e))
    }

    pub fn envelope(&self) -> Value {
        let mut env = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input": self.input,
        });
        let map = env.as_object_mut().expect("object literal");
        match &self.outcome {
            Ok(result) => {
                map.insert("status".into(), json!("ok"));
                map.insert("result".into(), result.clone());
            }
            Err(body) => {
                map.insert("status".into(), json!("error"));
                map.insert("error".into(), json!({ "code": body.code, "message": body.message }));
            }
        }
        env
    }
}

/// Compact, key-sorted serialization.
pub fn render(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialize")
}
