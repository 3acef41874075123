//! Batch front end: a job is parsed from the command line, executed on a
//! bounded thread pool, and rendered as text, JSON or CSV.

pub mod commands;
pub mod fixtures;
pub mod input;
pub mod job;
pub mod verify;

use std::fmt;

use serde_json::Value;

pub use job::{Command, Format, JobSpec, Level};

/// Why a job stopped without a result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Guard(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Guard(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Guard(m) => write!(f, "resource guard: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<syzcalc::Error> for Failure {
    fn from(e: syzcalc::Error) -> Self {
        use syzcalc::Error as E;
        let msg = e.to_string();
        match e {
            E::BasisLimit(_) | E::Guard(_) | E::NoStabilization(_) | E::ResolutionTooLong(_) => Failure::Guard(msg),
            E::Internal(_) | E::NotGroebner => Failure::Internal(msg),
            _ => Failure::Input(msg),
        }
    }
}

impl From<syzcalc::AlgebraError> for Failure {
    fn from(e: syzcalc::AlgebraError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A finished computation in all its renderings.
#[derive(Clone, Debug)]
pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    /// Nonzero when a check inside the job failed.
    pub exit_code: i32,
}

impl Output {
    pub fn new(json: Value, text: String) -> Self {
        Output { json, text, csv: None, exit_code: 0 }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Text => Ok(ensure_newline(self.text.clone())),
            Format::Json => Ok(ensure_newline(serde_json::to_string_pretty(&self.json).expect("serializable"))),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| Failure::Input("CSV output is available for tables only".into())),
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Exit code, the bytes for standard output, and diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `job`, with at most `--threads` workers.
pub fn run(job: &JobSpec) -> Outcome {
    let fail = |f: Failure| Outcome { code: f.exit_code(), stdout: String::new(), stderr: format!("syzcalc: {f}\n") };
    if let Err(m) = job.validate() {
        return fail(Failure::Input(m));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = job.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return fail(Failure::Internal(format!("thread pool: {e}"))),
    };
    match pool.install(|| commands::execute(job)).and_then(|out| Ok((out.render(job.format)?, out.exit_code))) {
        Ok((stdout, code)) => Outcome { code, stdout, stderr: String::new() },
        Err(f) => fail(f),
    }
}
