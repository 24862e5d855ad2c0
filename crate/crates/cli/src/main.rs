//! `verify`: runs the exact-arithmetic certificate suites over the shipped
//! fixtures and emits a deterministic pass/fail report.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on
//! configuration or fixture errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use severi_core::report::{Format, RunConfig};
use severi_core::suites;

#[derive(Parser)]
#[command(name = "verify", version, about = "Exact symbolic verification of the Brauer-Severi degeneration certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Run {
        /// Suite to run (repeatable): basis, relations, freeness, fiber,
        /// ampleness, or all. Defaults to all.
        #[arg(long = "suite", value_name = "NAME")]
        suite: Vec<String>,
        /// Report format.
        #[arg(long, value_name = "json|text", default_value = "text")]
        format: String,
        /// Write the report to PATH instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Fixture directory. Falls back to $VERIFY_FIXTURES, then
        /// ./fixtures.
        #[arg(long, value_name = "DIR")]
        fixtures: Option<PathBuf>,
        /// Write the seven multiplication matrices to DIR (freeness suite).
        #[arg(long = "dump-matrices", value_name = "DIR")]
        dump_matrices: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { suite, format, out, fixtures, dump_matrices } => {
            run(suite, format, out, fixtures, dump_matrices)
        }
    }
}

fn run(
    suite: Vec<String>,
    format: String,
    out: Option<PathBuf>,
    fixtures: Option<PathBuf>,
    dump_matrices: Option<PathBuf>,
) -> ExitCode {
    let names = if suite.is_empty() { vec!["all".to_string()] } else { suite };
    let suites_resolved = match RunConfig::resolve_suites(&names) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format: Format = match format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let fixture_dir = fixtures
        .or_else(|| std::env::var_os("VERIFY_FIXTURES").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("fixtures"));

    let config = RunConfig {
        suites: suites_resolved,
        format,
        out,
        fixture_dir,
        dump_matrices,
    };
    match suites::run(&config) {
        Ok(report) => {
            if config.out.is_none() {
                let body = match config.format {
                    Format::Json => report.to_json(),
                    Format::Text => report.to_text(),
                };
                print!("{body}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
