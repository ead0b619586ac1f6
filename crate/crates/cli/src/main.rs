mod args;
mod commands;

use args::{Cli, Format};
use clap::Parser;
use hk_lattice::Error;
use std::io::{self, Write};
use std::process::ExitCode;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) => 2,
        Error::Unsupported(_) | Error::Resource(_) => 3,
        Error::Inconsistency(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n"
                }
                Format::Text => out.text,
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = io::stdout().lock().write_all(rendered.as_bytes());
            match out.failure {
                Some(err) => {
                    eprintln!("error: {err}");
                    ExitCode::from(exit_code(&err))
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
