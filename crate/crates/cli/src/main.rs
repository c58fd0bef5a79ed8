use std::process::ExitCode;

use clap::Parser;
use cstore_cli::{run, Cli, MEM_BUDGET_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(
        &cli,
        std::env::var(MEM_BUDGET_ENV).ok(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
