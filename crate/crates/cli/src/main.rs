//! `underspread`: pulse inspection, coefficients, bounds, intervals and sweeps.
//!
//! Every output embeds the resolved configuration, as a `config` object in
//! JSON or a leading `# config: {...}` line in CSV. Failures print one JSON
//! line on stderr and exit with 2 (usage), 3 (parameter), 4 (computation)
//! or 5 (I/O).

mod args;
mod config;
mod error;
mod run;

use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use config::RunConfig;
use error::CliError;

/// Accepts a bare config or a previous JSON output carrying one.
fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {} is not JSON: {e}", path.display())))?;
    let inner = match value.get("config") {
        Some(c) => c.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let config = match (&cli.config, &cli.command) {
        (Some(path), None) => load_config(path)?,
        (None, Some(sub)) => sub.resolve(),
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --config or a subcommand, not both".into())),
        (None, None) => return Err(CliError::Usage("no subcommand; try --help".into())),
    };
    let text = run::run(&config)?;
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            let err = CliError::Usage(first);
            eprintln!("{}", err.to_line());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_line());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
