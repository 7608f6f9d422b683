//! The `factorkit` command-line tool. Emits JSON on standard output; exits 0
//! on success, 1 when the theory rejects a well-formed request (or a
//! verification suite finds failures) and 2 on malformed input.

mod args;
mod commands;
mod render;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Failure;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    match commands::run(cli) {
        Ok(out) => {
            if pretty {
                print!("{}", out.table);
            } else {
                println!(
                    "{}",
                    serde_json::to_string(&out.doc).expect("reports serialise")
                );
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
