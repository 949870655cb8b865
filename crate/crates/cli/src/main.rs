mod args;
mod commands;
mod error;
mod run;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, RunSpec};
use error::CliError;

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Simulate(run) => commands::simulate(&RunSpec::from_args(&run)?).map(|_| true),
        Command::Analyze { which, run } => commands::analyze(which, &RunSpec::from_args(&run)?).map(|_| true),
        Command::Figure { which, run } => commands::figure(which, &RunSpec::from_args(&run)?).map(|_| true),
        Command::Verify {
            suite,
            max_steps,
            tol,
            out,
        } => commands::verify(suite, max_steps, tol, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
