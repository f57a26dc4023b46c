mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use commands::Failure;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let outcome = commands::run(cli.command);
    let mut stdout = std::io::stdout().lock();
    match outcome {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Disagreement(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            eprintln!("error: pipelines disagree");
            ExitCode::from(3)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
