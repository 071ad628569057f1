mod args;
mod commands;
mod envelope;
mod error;
mod input;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::Outcome;
use error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PBOUND_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("PBOUND_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot configure thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    if cli.format == Format::Csv && !matches!(cli.command, Command::Pmf(_)) {
        return Err(CliError::Input("--format csv is only available for pmf".into()));
    }
    match &cli.command {
        Command::Pmf(a) => commands::pmf(a),
        Command::Constant(a) => commands::constant(a),
        Command::Check(a) => {
            let c = commands::constants(pbound::bound::DEFAULT_TOLERANCE)?;
            commands::check(a, &c)
        }
        Command::Verify(a) => {
            let c = commands::constants(pbound::bound::DEFAULT_TOLERANCE)?;
            verify::verify(a, &c)
        }
    }
}

fn render(format: Format, outcome: &Outcome) -> String {
    match format {
        Format::Json => outcome.envelope.to_json() + "\n",
        Format::Table => outcome.envelope.to_table(),
        Format::Csv => {
            let mut out = String::from("index,probability,sigma_times_probability\n");
            for (i, p, sp) in outcome.rows.as_deref().unwrap_or_default() {
                out.push_str(&format!("{i},{p:?},{sp:?}\n"));
            }
            out
        }
    }
}

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
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", render(cli.format, &outcome));
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("pbound: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Err(e) => {
            eprintln!("pbound: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
