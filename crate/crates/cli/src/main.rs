use std::process::ExitCode;

use dimerspin_cli::{execute, parse_config, CliError};

fn main() -> ExitCode {
    let result = parse_config(std::env::args_os()).and_then(|config| execute(&config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) => e.exit(),
        Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dimerspin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
