//! `deformed-bec` command-line driver.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CommandError;
use crate::config::Resolved;
use crate::record::Format;

#[derive(Parser)]
#[command(
    name = "deformed-bec",
    version,
    about = "Bose gas with a linear-in-momentum dispersion correction in a power-law trap"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Undeformed and deformed condensation temperatures.
    Tc(Common),
    /// Spatial density profile along a ray through the trap centre.
    Density(Common),
    /// Particle-number fluctuations and compressibility at temperature_K.
    Fluct(Common),
    /// Largest |xi1| compatible with the configured resolution.
    Bound(Common),
    /// Sweep N, s1, xi1 or T as set in the scan section.
    Scan(Common),
    /// Compare the analytic results against brute-force phase-space quadrature.
    OracleCheck(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    output: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

type Action = fn(&Resolved) -> Result<record::Output, CommandError>;

const CONFIG_ERROR: u8 = 2;
const NUMERIC_ERROR: u8 = 3;

fn run(command: Command) -> Result<(), (u8, String)> {
    let (common, action): (Common, Action) = match command {
        Command::Tc(c) => (c, commands::tc),
        Command::Density(c) => (c, commands::density),
        Command::Fluct(c) => (c, commands::fluct),
        Command::Bound(c) => (c, commands::bound),
        Command::Scan(c) => (c, commands::scan),
        Command::OracleCheck(c) => (c, commands::oracle_check),
    };
    let config_err = |e: String| (CONFIG_ERROR, format!("configuration error: {e}"));
    let cfg = config::load(&common.config).map_err(|e| config_err(e.to_string()))?;
    let resolved = Resolved::new(cfg).map_err(|e| config_err(e.to_string()))?;
    let output = action(&resolved).map_err(|e| match e {
        CommandError::Config(_) => (CONFIG_ERROR, e.to_string()),
        CommandError::Numeric(_) => (NUMERIC_ERROR, e.to_string()),
    })?;
    let format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let mut sink: Box<dyn Write> = if common.output == "-" {
        Box::new(io::stdout().lock())
    } else {
        let file =
            File::create(&common.output).map_err(|e| config_err(format!("cannot create {}: {e}", common.output)))?;
        Box::new(BufWriter::new(file))
    };
    output
        .write(format, &mut sink)
        .and_then(|()| sink.flush())
        .map_err(|e| config_err(format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("deformed-bec: {message}");
            ExitCode::from(code)
        }
    }
}
