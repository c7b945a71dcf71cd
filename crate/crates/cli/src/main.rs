//! `csym`: classification, construction, spectra and verification for
//! J-self-adjoint extensions with C-symmetries.

mod commands;
mod config;
mod error;
mod output;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{ConfigFile, GlobalFlags, Overrides, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "csym", version, about = "C-symmetries of J-self-adjoint extensions")]
struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// CSV output for sweeps (`-` for stdout).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long = "grid-L", global = true)]
    grid_l: Option<f64>,
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<usize>,
    /// Read all angles in degrees.
    #[arg(long, global = true)]
    degrees: bool,
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the extension given by U.
    Classify,
    /// Build C_{θ,ω}, its generator and projectors.
    BuildC,
    /// Coupling matrix T of the point interaction, by both construction paths.
    TMatrix,
    /// Essential and discrete spectrum, optionally swept over one parameter.
    Spectrum,
    /// Apply the Krein resolvent formula to an input function.
    Resolvent,
    /// Run the oracle cross-checks.
    Verify {
        /// Perturb the matrix under test in the named check.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let rc = RunConfig::merge(
        file,
        GlobalFlags {
            overrides: &cli.overrides,
            tol: cli.tol,
            grid_l: cli.grid_l,
            grid_n: cli.grid_n,
            json: cli.json,
            csv: cli.csv.clone(),
            degrees: cli.degrees,
        },
    )?;
    let report = match &cli.command {
        Command::Classify => commands::cmd_classify(&rc)?,
        Command::BuildC => commands::cmd_build_c(&rc)?,
        Command::TMatrix => commands::cmd_tmatrix(&rc)?,
        Command::Spectrum => commands::cmd_spectrum(&rc)?,
        Command::Resolvent => commands::cmd_resolvent(&rc)?,
        Command::Verify { inject_fault } => {
            let records = verify::run(inject_fault.as_deref())?;
            let failed: Vec<&str> = records.iter().filter(|r| !r.passed).map(|r| r.name).collect();
            let text = if rc.json {
                serde_json::to_string_pretty(&json!({"checks": records, "passed": failed.is_empty()}))
                    .expect("serializable")
            } else {
                records
                    .iter()
                    .map(|r| {
                        format!(
                            "{} {:<18} residual {:.3e} (tol {:.0e}){}",
                            if r.passed { "PASS" } else { "FAIL" },
                            r.name,
                            r.residual,
                            r.tolerance,
                            r.error.as_deref().map(|e| format!(" {e}")).unwrap_or_default()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            if failed.is_empty() {
                return Ok(text);
            }
            emit(&text);
            return Err(CliError::Verification(failed.join(", ")));
        }
    };
    Ok(output::render(&report, rc.json))
}

/// Prints to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
