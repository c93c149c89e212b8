//! `dunkl`: exact identity checks and tables for the Z2^3 Dunkl Laplacian.
//!
//! Exit codes: 0 when every check holds, 1 when a check fails or a
//! computation errors, 2 on invalid arguments or environment.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::{thread_override, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match thread_override() {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: cannot size the thread pool: {e}");
                return ExitCode::from(2);
            }
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }

    let report = match commands::run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = output::write(&report, &config) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for f in &report.failures {
        eprintln!("FAIL: {f}");
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
