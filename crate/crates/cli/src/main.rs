//! `twinsearch` command-line tool.

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

/// Exit statuses.
pub mod status {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const EMPTY: u8 = 2;
    pub const BUDGET: u8 = 3;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { status::USAGE } else { status::OK };
            // clap prints help/version to stdout and errors with a usage line to stderr
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
