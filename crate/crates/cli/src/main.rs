//! `linmon`: check, generate and benchmark concurrent histories.
//!
//! Exit codes: 0 linearizable, 1 non-linearizable, 2 bad input or configuration,
//! 3 internal error or exhausted oracle budget.

mod bench;
mod check;
mod generate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Process exit status. Verdicts only ever map to 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    /// Linearizable, or the command finished.
    Success = 0,
    NonLinearizable = 1,
    InputError = 2,
    Internal = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Parser)]
#[command(name = "linmon", version, about = "Linearizability monitoring for unambiguous concurrent histories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one or more history files.
    Check(check::CheckArgs),
    /// Write a random linearizable (optionally mutated) history.
    Generate(generate::GenerateArgs),
    /// Time the checker on generated histories of increasing size.
    Bench(bench::BenchArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError } else { Status::Success };
            let _ = e.print();
            return code.into();
        }
    };
    let status = match cli.command {
        Command::Check(args) => check::run(args),
        Command::Generate(args) => generate::run(args),
        Command::Bench(args) => bench::run(args),
    };
    status.into()
}
