use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    deduct::cli::run(deduct::cli::Cli::parse())
}
