use std::process::ExitCode;

use clap::Parser;
use fillin::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fillin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
