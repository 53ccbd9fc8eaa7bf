mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{dispatch, Failure};

const USAGE: u8 = 1;
const NUMERICAL: u8 = 2;

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(USAGE);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let common = cli.command.common().clone();
    let result = match common.threads {
        Some(0) => Err(Failure::Usage("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("--threads {t}: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Core(e)) if e.is_numerical() => {
            if matches!(e, eigdeloc::Error::Trial { .. }) {
                eprintln!("numerical failure: {e}");
            } else {
                eprintln!("numerical failure (master seed {}): {e}", common.seed);
            }
            ExitCode::from(NUMERICAL)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
