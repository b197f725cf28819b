use clap::Parser;
use itclust_cli::cli::{run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("itclust: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
