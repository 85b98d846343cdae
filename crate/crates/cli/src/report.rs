use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use vcycle::{Error, FieldKind};

/// Version of the JSON envelope; bumped on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn versions() -> Value {
    json!({ "schema": SCHEMA_VERSION, "vcycle": vcycle::VERSION, "cli": env!("CARGO_PKG_VERSION") })
}

pub struct Report {
    command: &'static str,
    input_digest: Option<String>,
    seed: Option<u64>,
    field: Option<FieldKind>,
    pub results: Value,
    pub trace: Value,
    human: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, input_digest: Option<String>, seed: Option<u64>, field: Option<FieldKind>) -> Self {
        Report {
            command,
            input_digest,
            seed,
            field,
            results: Value::Null,
            trace: Value::Null,
            human: Vec::new(),
        }
    }

    pub fn line(&mut self, s: String) {
        self.human.push(s);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "field": self.field.map(|f| f.to_string()),
            "results": self.results,
            "trace": self.trace,
            "versions": versions(),
        })
    }

    pub fn emit(&self, json: bool) {
        let mut out = std::io::stdout().lock();
        // a closed pipe downstream is not our failure
        let _ = if json {
            writeln!(out, "{}", serde_json::to_string_pretty(&self.to_json()).expect("json renders"))
        } else {
            self.human.iter().try_for_each(|l| writeln!(out, "{l}"))
        };
    }
}

pub enum Failure {
    Compute(Error),
    Io(String),
    /// Bundled examples that did not reproduce.
    Corpus(Box<Report>, usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    pub fn corpus(rep: Report, failed: usize) -> Self {
        Failure::Corpus(Box::new(rep), failed)
    }

    /// `(exit code, kind)`.
    pub fn classify(&self) -> (u8, &'static str) {
        match self {
            Failure::Corpus(..) => (1, "corpus-mismatch"),
            Failure::Io(_) => (10, "io"),
            Failure::Compute(e) => match e {
                Error::Parse(_) => (2, "parse"),
                Error::InvalidInput(_)
                | Error::RingMismatch(_)
                | Error::ZeroPolynomial(_)
                | Error::NonHomogeneous
                | Error::SingularMatrix => (2, "invalid-input"),
                Error::NonDominant { .. } => (3, "non-dominant"),
                Error::Genericity { .. } => (4, "genericity"),
                Error::Disagreement(_) => (5, "disagreement"),
                Error::NotIsolated => (6, "not-isolated"),
                Error::CapExceeded { .. } => (7, "cap-exceeded"),
                Error::Unsupported(_) => (8, "unsupported"),
                Error::BaseLocusEverything => (9, "base-locus-everything"),
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Compute(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
            Failure::Corpus(_, n) => format!("{n} example(s) did not reproduce"),
        }
    }

    pub fn emit(self, command: &str, json: bool) -> ExitCode {
        let (code, kind) = self.classify();
        let msg = self.message();
        if let Failure::Corpus(rep, _) = &self {
            rep.emit(json);
        } else if json {
            let v = json!({
                "command": command,
                "error": { "kind": kind, "message": msg, "exit_code": code },
                "versions": versions(),
            });
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&v).expect("json renders"));
        }
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_have_distinct_codes() {
        let failures = [
            Failure::Compute(Error::Parse("x".into())),
            Failure::Compute(Error::NonDominant { step: 2, steps: 2 }),
            Failure::Compute(Error::Genericity { attempts: 8, context: String::new() }),
            Failure::Compute(Error::Disagreement(String::new())),
            Failure::Compute(Error::NotIsolated),
            Failure::Compute(Error::CapExceeded { cap: 1, context: String::new() }),
            Failure::Compute(Error::Unsupported(String::new())),
            Failure::Compute(Error::BaseLocusEverything),
            Failure::Io(String::new()),
            Failure::corpus(Report::new("examples-run-all", None, None, None), 1),
        ];
        let mut codes: Vec<u8> = failures.iter().map(|f| f.classify().0).collect();
        assert_eq!(&codes[..4], &[2, 3, 4, 5]);
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), failures.len());
        assert!(!codes.contains(&0));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
