use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kleinkit::dsl::parse_angle;
use kleinkit::report::{ErrorInfo, RunReport, EXIT_ERROR};
use kleinkit::{check_source, Options};
use kleinkit_core::klein::CATALOG;

#[derive(Parser)]
#[command(name = "kleinkit", version, about = "Check ladder-algebra identities written in .kq scripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every assertion in a script.
    Check {
        /// Script to run (not needed with --list-maps).
        #[arg(required_unless_present = "list_maps")]
        script: Option<PathBuf>,
        /// Boson cutoff for numeric checks; enables them.
        #[arg(long, value_name = "D")]
        numeric_dim: Option<usize>,
        /// Comma-separated angles, e.g. "pi,pi/3".
        #[arg(long, value_name = "v,...", value_delimiter = ',', value_parser = angle)]
        theta: Option<Vec<f64>>,
        /// Numeric tolerance on the interior residual.
        #[arg(long, value_name = "x", value_parser = angle)]
        tol: Option<f64>,
        /// Adds one seeded random angle to the probes of formal-q scripts.
        #[arg(long, value_name = "n")]
        seed: Option<u64>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Print the dressing catalog and exit.
        #[arg(long)]
        list_maps: bool,
    },
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let Command::Check { script, numeric_dim, theta, tol, seed, json, list_maps } = Cli::parse().command;
    if list_maps {
        for (name, description) in CATALOG {
            println!("{name:<24} {description}");
        }
        return ExitCode::SUCCESS;
    }
    let path = script.expect("clap enforces a script");
    let name = path.display().to_string();
    let opts = Options { numeric_dim, theta, tol, seed };
    let report = match std::fs::read_to_string(&path) {
        Ok(src) => check_source(&name, &src, &opts),
        Err(e) => RunReport::from_error(
            &name,
            ErrorInfo { line: 0, column: 0, message: format!("cannot read script: {e}"), expected: Vec::new() },
        ),
    };
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
    ExitCode::from(u8::try_from(report.exit_code).unwrap_or(EXIT_ERROR as u8))
}
