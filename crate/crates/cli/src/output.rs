use std::io::Write;
use std::process::ExitCode;

use matroid_hodge::Error;
use serde_json::{json, Value};

use crate::SCHEMA_VERSION;

/// Result of a command: a JSON payload, its text rendering and the verdict.
pub struct Outcome {
    pub command: &'static str,
    pub subject: Option<String>,
    pub pass: bool,
    pub payload: Value,
    pub text: String,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit: u8,
}

impl CliError {
    pub fn usage(message: String) -> CliError {
        CliError { kind: "usage_error", message, exit: 2 }
    }

    pub fn file_not_found(message: String) -> CliError {
        CliError { kind: "file_not_found", message, exit: 2 }
    }

    pub fn malformed(message: String) -> CliError {
        CliError { kind: "malformed_input", message, exit: 2 }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let (kind, exit) = match &e {
            Error::RouteDisagreement(_)
            | Error::IdentityViolation(_)
            | Error::DecompositionViolation(_)
            | Error::FanPropertyViolation(_)
            | Error::NonzeroRemainder => ("verification_failure", 1),
            Error::SizeCapExceeded { .. } | Error::GroundSetSize { .. } => ("size_cap_exceeded", 2),
            Error::NotAmple(_) | Error::NotStrictlySubmodular(_) => ("not_ample", 2),
            Error::NotAnOrderFilter(_) | Error::NotAFlat(_) => ("usage_error", 2),
            Error::RankTooSmall { .. } => ("usage_error", 2),
            _ => ("malformed_input", 2),
        };
        CliError { kind, message: e.to_string(), exit }
    }
}

pub fn emit(outcome: &Outcome, json: bool) -> ExitCode {
    if json {
        let mut report = json!({
            "schema_version": SCHEMA_VERSION,
            "command": outcome.command,
            "pass": outcome.pass,
            "result": outcome.payload,
        });
        if let Some(s) = &outcome.subject {
            report["subject"] = json!(s);
        }
        write_stdout(&format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")));
    } else {
        let mut text = outcome.text.clone();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        text.push_str(if outcome.pass { "PASS\n" } else { "FAIL\n" });
        write_stdout(&text);
    }
    ExitCode::from(if outcome.pass { 0 } else { 1 })
}

pub fn emit_error(err: &CliError, json: bool) -> ExitCode {
    if json {
        let report = json!({
            "schema_version": SCHEMA_VERSION,
            "error": { "kind": err.kind, "message": err.message },
        });
        write_stdout(&format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")));
    } else {
        eprintln!("error ({}): {}", err.kind, err.message);
    }
    ExitCode::from(err.exit)
}

/// A closed pipe (`| head`) is not an error worth reporting.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}
