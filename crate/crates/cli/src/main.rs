//! `curvalign`: generate curves, align them rigidly, compute elastic
//! distances and distance matrices, and benchmark the rigid aligners.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a distance
//! matrix has failed pairs. Artifacts go to `--out` or stdout; diagnostics
//! go to stderr.

mod args;
mod bench;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

/// Result of a command that did not error out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Partial,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Align(a) => commands::align(&a),
        Command::Distance(a) => commands::distance(&a),
        Command::Matrix(a) => commands::matrix(&a),
        Command::Bench(a) => bench::run(&a),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
