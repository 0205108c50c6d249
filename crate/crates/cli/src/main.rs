mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use zeroclass::Error;

use crate::args::Cli;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NumericFailure { .. } => 3,
        Error::InvalidArgument(_) | Error::Parse(_) | Error::Io(_) => 2,
    }
}

/// Applies the optional `THREADS` cap to the global worker pool.
fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var("THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("THREADS must be a positive integer, got '{text}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("zeroclass: {msg}");
        return ExitCode::from(2);
    }
    let result = commands::run(&cli.command).and_then(|outcome| {
        let written = output::write_outputs(&outcome.out, &outcome.report, &outcome.extra)?;
        Ok((outcome, written))
    });
    match result {
        Ok((outcome, written)) => {
            let report = &outcome.report;
            println!("{}: {}", report.provenance.command, report.system_label);
            for (name, entry) in &report.verdicts {
                println!("  {}", entry.line(name));
            }
            for note in &outcome.notes {
                println!("  {note}");
            }
            for path in written {
                println!("  wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("zeroclass: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
