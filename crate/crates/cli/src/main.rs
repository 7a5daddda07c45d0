use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(impobs::run(impobs::Cli::parse()))
}
