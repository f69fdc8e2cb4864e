use std::process::ExitCode;

use cfs45_cli::app::{execute, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.report()).expect("error serializes"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
