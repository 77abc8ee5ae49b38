use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = c45::cli::Cli::parse();
    match c45::cli::run(cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
