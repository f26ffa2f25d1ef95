use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use geopower_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Some(text)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
