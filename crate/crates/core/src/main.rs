use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fockbridge::harness::{self, EXIT_USAGE, OUTPUT_ENV};

/// Fock-space algebra and classical/quantum equivalence checks.
#[derive(Parser)]
#[command(name = "fockbridge", version, after_help = "Reports go under $FOCKBRIDGE_OUT (default ./fockbridge-out).\nExit status: 0 pass, 1 check failure, 2 usage or configuration error.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config.
    Run { config: PathBuf },
    /// Run every *.json config in a directory.
    Suite { dir: PathBuf },
    /// Print the canonical normal form of an operator expression.
    Reduce { expr: String },
    /// Print the version.
    Version,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let root = harness::output_root();
    match cli.command {
        Command::Run { config } => match harness::run_file(&config, &root) {
            Ok(report) => {
                for c in &report.checks {
                    println!(
                        "{} {:<28} gap={:.3e} tol={:.3e}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.experiment,
                        c.abs_gap,
                        c.tolerance
                    );
                }
                println!("{}: {}", report.name, if report.passed { "pass" } else { "FAIL" });
                code(report.exit_code())
            }
            Err(e) => {
                eprintln!("error: {e}");
                code(EXIT_USAGE)
            }
        },
        Command::Suite { dir } => match harness::suite(&dir, &root) {
            Ok(report) => {
                for e in &report.entries {
                    let status = match e.status {
                        harness::EntryStatus::Pass => "PASS",
                        harness::EntryStatus::Fail => "FAIL",
                        harness::EntryStatus::Error => "ERROR",
                    };
                    match &e.error {
                        Some(msg) => println!("{status} {} ({msg})", e.config),
                        None => println!("{status} {}", e.config),
                    }
                }
                println!("{} passed, {} failed, {} errors", report.passed, report.failed, report.errors);
                code(report.exit_code())
            }
            Err(e) => {
                eprintln!("error: {e}");
                code(EXIT_USAGE)
            }
        },
        Command::Reduce { expr } => match harness::reduce(&expr) {
            Ok(p) => {
                println!("{p}");
                code(0)
            }
            Err(e) => {
                eprintln!("error: {e}");
                code(EXIT_USAGE)
            }
        },
        Command::Version => {
            println!("fockbridge {} (output root from ${OUTPUT_ENV})", env!("CARGO_PKG_VERSION"));
            code(0)
        }
    }
}
