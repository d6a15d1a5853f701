use std::process::ExitCode;

use clap::Parser;
use gsched_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = gsched_cli::run(&cli, &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
