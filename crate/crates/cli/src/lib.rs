//! Command-line front end: `compile` one graph, `bench` a family of graphs
//! into CSV, `verify` a stored result.

pub mod args;
pub mod bench;
pub mod commands;
pub mod error;

use std::io::Write;

use args::{Cli, Command};
use error::CliError;

/// Runs a parsed command line. Errors are printed to `err`; the return
/// value is the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result: Result<(), CliError> = match &cli.command {
        Command::Compile(a) => commands::compile_cmd(a, out, err),
        Command::Bench(a) => commands::bench_cmd(a, out, err),
        Command::Verify(a) => commands::verify_cmd(a, out),
    };
    match result {
        Ok(()) => error::code::OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
