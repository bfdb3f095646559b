use std::process::ExitCode;

use clap::Parser;
use staircase_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("staircase: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
