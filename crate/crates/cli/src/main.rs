//! `werner`: evolve, measure, scan and cross-check Werner states under
//! amplitude damping.
//!
//! Exit codes: 0 success, 1 configuration error, 2 validation failure,
//! 3 I/O error.

mod args;
mod commands;
mod config;
mod error;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use config::RunConfig;
use error::CliError;

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    config::apply_env_tolerance()?;
    let cfg = RunConfig::from_options(cli.command, &cli.opts)?;
    let mut artifact = commands::run(&cfg)?;
    let failure = artifact.failure.take();
    let echo = cfg.echo_config.then(|| cfg.echo());
    emit(&artifact.render(echo), cfg.output.as_ref())?;
    failure.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
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
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("werner: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
