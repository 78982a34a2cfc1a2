mod args;
mod commands;
mod context;
mod error;
mod steps;

use std::io::Write as _;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use context::{config_hash, RunContext};
use error::{CliError, CliResult};

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Sample(_) => "sample",
        Command::Shapes(_) => "shapes",
        Command::Evaluate(_) => "evaluate",
        Command::Fit(_) => "fit",
        Command::Eigs(_) => "eigs",
        Command::Bootstrap(_) => "bootstrap",
        Command::Shadow(_) => "shadow",
        Command::Pareto(_) => "pareto",
        Command::Convergence(_) => "convergence",
        Command::Validate(_) => "validate",
        Command::RunAll(_) => "run-all",
    }
}

fn execute(cli: Cli) -> CliResult<serde_json::Value> {
    let hash = config_hash(cli.seed, &cli.command);
    let ctx = RunContext::new(cli.out.clone(), cli.seed, hash, command_name(&cli.command))?;
    let summary = commands::run(&ctx, &cli.command)?;
    Ok(serde_json::json!({
        "command": ctx.command,
        "out": context::display(&ctx.out),
        "config_hash": ctx.config_hash,
        "summary": summary,
        "artifacts": ctx.written(),
    }))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FOILSPACE_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit();
        }
        Err(e) => {
            let err = CliError::usage(
                e.to_string().trim().to_string(),
                "run `foilspace --help` for the flag reference",
            );
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // a closed pipe is the reader's choice, not a failure of the run
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
