use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eigenineq::scenario::{self, Overrides, Scenario};

/// Spectral-geometry verification toolkit: model spectra, discrete
/// Laplace-Beltrami / Schrodinger / Kohn operators, and universal
/// eigenvalue inequality reports.
#[derive(Parser)]
#[command(name = "eigenineq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario by name, or a TOML scenario config by path.
    Run {
        /// Built-in scenario name (see `list`) or path to a config file.
        target: String,
        /// Override the largest k evaluated.
        #[arg(long = "k-max")]
        k_max: Option<usize>,
        /// Override the relative verdict tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Override the solver seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for reports.
        #[arg(long, default_value = "eigenineq-out")]
        out: PathBuf,
        /// Override the geometry refinement knob (subdivisions, grid
        /// resolution, or rings, depending on the scenario).
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// List the built-in scenarios.
    List,
    /// Parse and validate a scenario config without solving anything.
    Validate { config: PathBuf },
}

fn resolve_target(target: &str) -> Result<Scenario, eigenineq::Error> {
    if let Some(s) = scenario::find_scenario(target) {
        return Ok(s);
    }
    let path = PathBuf::from(target);
    if path.exists() {
        return scenario::validate_config(&path);
    }
    Err(eigenineq::Error::config(format!(
        "'{target}' is neither a built-in scenario nor an existing config file; try `eigenineq list`"
    )))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for name in scenario::list_scenarios() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match scenario::validate_config(&config) {
            Ok(s) => {
                println!("# config is valid; normalized form:\n{}", s.to_toml());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("invalid config: {e}");
                ExitCode::from(2)
            }
        },
        Command::Run {
            target,
            k_max,
            tol,
            seed,
            out,
            resolution,
        } => {
            let scenario = match resolve_target(&target) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let scenario = scenario.with_overrides(&Overrides {
                k_max,
                tolerance: tol,
                seed,
                resolution,
            });
            match scenario::run_scenario(&scenario, &out) {
                Ok(output) => {
                    for report in &output.reports {
                        let verdict = if report.all_satisfied() { "PASS" } else { "FAIL" };
                        println!(
                            "[{verdict}] {:<16} rows={:<3} worst-rel-margin={:+.3e}  {}",
                            report.theorem.tag(),
                            report.rows.len(),
                            report.worst_margin(),
                            report.source
                        );
                    }
                    println!(
                        "wrote {} files to {} in {:.2}s",
                        output.manifest.files.len(),
                        out.display(),
                        output.manifest.wall_clock_seconds
                    );
                    if output.manifest.all_satisfied {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
