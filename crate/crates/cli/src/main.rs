mod args;
mod commands;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use cslrad::Error;

use args::Cli;
use commands::EXIT_NO_POSITIVE_LIMIT;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            let no_limit = matches!(
                e.downcast_ref::<Error>(),
                Some(Error::NoPositiveLimit { .. })
            );
            return ExitCode::from(if no_limit { EXIT_NO_POSITIVE_LIMIT } else { 1 });
        }
    };

    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code)
}
