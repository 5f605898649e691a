//! Scenario orchestration for the pinchlab binary.
//!
//! Every run emits three artifacts next to the `--out` prefix:
//! `<out>.csv` (stable, documented columns, 17 significant digits),
//! `<out>.summary.json`, and `<out>.violations.json`. Exit codes: `0` full
//! pass, `2` when any invariant or inequality check fired (the violations
//! file names the operation, inputs, and residual), `1` on usage or config
//! errors. Identical configs and seeds produce byte-identical CSVs; the
//! header timestamp comment is suppressed under `--reproducible`.

mod commands;
mod config;
mod output;

pub use config::{Cli, Command};

use clap::Parser;

/// Entry point returning the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Parses an argument vector and runs it; library entry for tests and
/// embedding.
pub fn run_args<I, T>(args: I) -> anyhow::Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    run(cli)
}

/// Runs a parsed invocation; returns the exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    let ctx = config::RunContext::resolve(&cli)?;
    let artifacts = match &cli.command {
        Command::Constants(args) => commands::constants::run(args, &ctx)?,
        Command::Verify(args) => commands::verify::run(args, &ctx)?,
        Command::Exact(args) => commands::exact::run(args, &ctx)?,
        Command::Flow(args) => commands::flow::run(args, &ctx)?,
        Command::Ode(args) => commands::ode::run(args, &ctx)?,
    };
    let any_violation = !artifacts.violations.is_empty();
    output::write_artifacts(&ctx, artifacts)?;
    Ok(if any_violation { 2 } else { 0 })
}
