mod args;
mod commands;
mod table;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use semilag_core::Error;

use args::{Cli, Command, Format};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

fn exit_code(err: &Error) -> u8 {
    if err.is_numerical_exhaustion() {
        EXIT_EXHAUSTED
    } else {
        EXIT_USAGE
    }
}

/// Error report on stderr, in the same format as the table would have been.
fn report(err: &Error, format: Format) {
    let mut stderr = io::stderr().lock();
    let _ = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut stderr);
            let _ = w.write_record(["error", "message"]);
            let _ = w.write_record([err.code(), &err.to_string()]);
            w.flush()
        }
        Format::Json => writeln!(
            stderr,
            "{}",
            serde_json::json!({ "error": err.code(), "message": err.to_string() })
        ),
    };
}

fn emit(table: &table::Table, format: Format) -> ExitCode {
    let mut stdout = io::stdout().lock();
    match table.write(format, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed pipe is not worth a panic
        Err(_) => ExitCode::from(EXIT_USAGE),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, min_n) = match &cli.command {
        Command::Coeffs { run, .. } | Command::Verify { run, .. } => (run, 1),
        Command::Trace { run, .. } => (run, 0),
    };
    let format = run.format;
    let cfg = match run.resolve(min_n) {
        Ok(cfg) => cfg,
        Err(err) => {
            report(&err, format);
            return ExitCode::from(exit_code(&err));
        }
    };

    let result = match &cli.command {
        Command::Coeffs { route, .. } => commands::coeffs(&cfg, *route).map(|t| emit(&t, format)),
        Command::Trace { quantity, .. } => commands::trace(&cfg, *quantity).map(|t| emit(&t, format)),
        Command::Verify { suite, tol, fault, .. } => {
            let (suites, skipped) = commands::suites(*suite, &cfg.alpha);
            for s in skipped {
                eprintln!("skipping suite {s}: its hypotheses need alpha > 0");
            }
            commands::verify(&cfg, &suites, tol.resolve(), *fault).map(|outcome| {
                let code = emit(&outcome.table, format);
                eprintln!("{} checks, {} failed", outcome.checks, outcome.failures);
                if outcome.failures > 0 {
                    ExitCode::from(EXIT_CHECK_FAILED)
                } else {
                    code
                }
            })
        }
    };
    result.unwrap_or_else(|err| {
        report(&err, format);
        ExitCode::from(exit_code(&err))
    })
}
