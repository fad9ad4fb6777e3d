use std::process::ExitCode;

use clap::Parser;
use quadsqueeze::cli::{error_report, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(written) => {
            for path in &written.files {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_report(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
