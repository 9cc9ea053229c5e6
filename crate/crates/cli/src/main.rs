mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::Experiment;
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    let args = cli.command.args();
    if let Some(k) = args.threads {
        if k == 0 {
            return Err(CliError::Config(
                "--threads: expected a positive integer, got 0".to_owned(),
            ));
        }
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    let exp = Experiment::resolve(args)?;
    let docs = match &cli.command {
        Command::Spectrum(_) => commands::spectrum(&exp)?,
        Command::ScanCoupling(_) => commands::scan_coupling_cmd(&exp)?,
        Command::ScanCutoff(_) => commands::scan_cutoff_cmd(&exp)?,
        Command::Classify(_) => commands::classify(&exp)?,
        Command::KernelDump(_) => commands::kernel_dump(&exp)?,
    };
    output::emit(
        cli.command.name(),
        exp.out.as_deref(),
        exp.provenance(),
        docs,
    )
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qei: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
