use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use serde::de::DeserializeOwned;
use serde::Serialize;

mod args;
mod commands;
mod config;
mod error;
mod output;

use args::{Cli, Command};
use error::CliError;
use output::Run;

fn allowed_keys(command: &str) -> Vec<String> {
    let cli = Cli::command();
    cli.find_subcommand(command)
        .map(|sub| {
            sub.get_arguments()
                .filter(|a| !a.is_global_set())
                .filter_map(|a| a.get_long().map(str::to_string))
                .filter(|l| l != "out" && l != "config")
                .collect()
        })
        .unwrap_or_default()
}

fn start<A: Serialize + DeserializeOwned>(cli_out: &Option<PathBuf>, config: &Option<PathBuf>, name: &'static str, flags: &A) -> Result<(A, Run), CliError> {
    let (args, file_out, inputs) = config::resolve(flags, config.as_deref(), &allowed_keys(name))?;
    let out = cli_out.clone().or(file_out).unwrap_or_else(|| PathBuf::from("out"));
    Ok((args, Run::new(out, name, inputs)?))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let name = cli.command.name();
    let (out, cfg) = (&cli.common.out, &cli.common.config);
    match &cli.command {
        Command::Design(flags) => {
            let (a, mut run) = start(out, cfg, name, flags)?;
            commands::design(&a, &mut run)?;
            run.finish()
        }
        Command::Classify(flags) => {
            let (a, mut run) = start(out, cfg, name, flags)?;
            commands::classify_cmd(&a, &mut run)?;
            run.finish()
        }
        Command::Propagate(flags) => {
            let (a, mut run) = start(out, cfg, name, flags)?;
            commands::propagate(&a, &mut run)?;
            run.finish()
        }
        Command::Jsa(flags) => {
            let (a, mut run) = start(out, cfg, name, flags)?;
            commands::jsa_cmd(&a.spdc, &mut run)?;
            run.finish()
        }
        Command::Hom(flags) => {
            let (a, mut run) = start(out, cfg, name, flags)?;
            commands::hom(&a, &mut run)?;
            run.finish()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::config(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code as u8)
        }
    }
}
