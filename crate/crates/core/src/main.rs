use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cyclodyne::cli::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_seed = match cli::seed_from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::EXIT_USAGE as u8);
        }
    };
    let outcome = cli::run(&cli, env_seed);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
