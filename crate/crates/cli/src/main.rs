use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use syzcalc_cli::{run, JobSpec};

fn main() -> ExitCode {
    let job = JobSpec::parse();
    let outcome = run(&job);
    eprint!("{}", outcome.stderr);
    if !outcome.stdout.is_empty() {
        let written = match &job.out {
            Some(path) => std::fs::write(path, &outcome.stdout),
            None => std::io::stdout().lock().write_all(outcome.stdout.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("syzcalc: cannot write output: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.code as u8)
}
