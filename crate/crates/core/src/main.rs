use std::process::ExitCode;

use clap::Parser;
use qhamil::cli::{self, Cli};
use qhamil::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    match cli::run(&cli, &argv) {
        Ok(outcome) => {
            for line in &outcome.report {
                println!("{line}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
