//! Command-line front end: expression parsing, session configuration and
//! JSON-emitting subcommands.

pub mod commands;
pub mod config;
pub mod eval;
pub mod expr;

use clap::Parser;
use robba_core::error::Error;
use serde_json::{json, Value};

use crate::commands::{dispatch, Cli};
use crate::config::{Overrides, SessionConfig};

/// An error ready to be reported as JSON.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub location: Option<Box<Value>>,
    pub exit: i32,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::Indeterminate(_) | Error::BudgetExceeded(_) => 3,
            Error::Internal(_) => 5,
            _ => 4,
        };
        CliError { code: e.code().into(), message: e.to_string(), location: None, exit }
    }
}

impl CliError {
    fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message, "location": self.location } })
    }
}

fn render(v: &Value, compact: bool) -> String {
    if compact {
        serde_json::to_string(v).expect("JSON values serialize")
    } else {
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    }
}

fn report(e: &CliError, provenance: Value, compact: bool) -> (i32, String) {
    let mut v = e.to_json();
    v["provenance"] = provenance;
    (e.exit, render(&v, compact))
}

/// clap's rendered error without the `error:` prefix and the usage footer.
fn usage_message(rendered: &str) -> String {
    rendered
        .lines()
        .take_while(|l| !l.starts_with("Usage:"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
        .trim_start_matches("error: ")
        .to_string()
}

fn command_name(cli: &Cli) -> String {
    let dbg = format!("{:?}", cli.command);
    let head = dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default();
    let mut out = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code together with everything that should go to stdout.
pub fn run(args: &[String]) -> (i32, String) {
    let compact = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let err = CliError {
                code: "usage_error".into(),
                message: usage_message(&e.to_string()),
                location: None,
                exit: 2,
            };
            return (2, render(&err.to_json(), compact));
        }
    };
    let ov = Overrides { prec_t: cli.prec_t.clone(), prec_w: cli.prec_w, backend: cli.backend.clone() };
    let session = match SessionConfig::load(cli.config.as_deref(), &ov) {
        Ok(s) => s,
        Err(message) => {
            let err = CliError { code: "invalid_config".into(), message, location: None, exit: 4 };
            return (4, render(&err.to_json(), cli.json));
        }
    };
    let ring = match session.build() {
        Ok(ring) => ring,
        Err(e) => return report(&CliError::from(e), session.provenance(None), cli.json),
    };
    let provenance = session.provenance(Some(&ring));
    match dispatch(&ring, &cli.command) {
        Ok(r) => {
            let v = json!({
                "schema": 1,
                "command": command_name(&cli),
                "result": r,
                "provenance": provenance,
            });
            (0, render(&v, cli.json))
        }
        Err(e) => report(&e, provenance, cli.json),
    }
}
