mod args;
mod commands;
mod instance;
mod output;

use std::process::ExitCode;

use clap::Parser;
use tailbound::{Error, Result};

use args::{Cli, Command};
use commands::{Outcome, Status};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("TAILBOUND_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("TAILBOUND_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))
}

fn run(cli: Cli) -> Result<Outcome> {
    configure_threads()?;
    let (outcome, out) = match &cli.command {
        Command::Eval(a) => (commands::eval(a)?, &a.output.out),
        Command::Crossings(o) => (commands::crossings(o)?, &o.out),
        Command::VerifyExact(a) => (commands::verify_exact(a)?, &a.output.out),
        Command::VerifyMc(a) => (commands::verify_mc(a)?, &a.verify.output.out),
        Command::Selfcheck(a) => (commands::selfcheck(a)?, &a.output.out),
        Command::Table(a) => (commands::table(a)?, &a.output.out),
    };
    output::emit(&outcome.text, out.as_deref())?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(if code == 0 { 0 } else { EXIT_USAGE });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            if let Some(s) = &outcome.summary {
                eprintln!("{s}");
            }
            match outcome.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Violation => ExitCode::from(EXIT_VIOLATION),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
