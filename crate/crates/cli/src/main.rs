mod cli;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::Cli;

/// Exit status for bad flags or invalid configuration.
const EXIT_USAGE: u8 = 1;
/// Exit status for unreadable, malformed or unusable data.
const EXIT_DATA: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = commands::configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e
                .downcast_ref::<rcd_core::Error>()
                .is_some_and(|e| matches!(e, rcd_core::Error::InvalidConfig(_) | rcd_core::Error::InvalidRange { .. }))
                || e.downcast_ref::<commands::UsageError>().is_some();
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_DATA })
        }
    }
}
