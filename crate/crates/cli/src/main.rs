//! `superinfo`: batch verification of finite models from the command line.
//!
//! Exit codes: 0 when every verdict passes, 1 when any verdict fails, 2 for
//! unusable input (bad flags, malformed or invalid model documents).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use superinfo_cli::commands::{self, CommandError, ConvergeArgs};
use superinfo_cli::report::{self, digest, RunReport, EXIT_INPUT};
use superinfo_cli::spec::parse_model_spec;

#[derive(Parser)]
#[command(name = "superinfo", version, about = "Possibility, superinformation and game-value checks on finite models")]
struct Cli {
    /// Write a JSON run report (command, input digest, verdicts, timing, exit code).
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predicate sweep over a model document, including superinformation detection.
    CheckModel {
        spec: PathBuf,
    },
    /// Cloning and predictor analysis for an observable and a state.
    Predict {
        spec: PathBuf,
        #[arg(long)]
        observable: String,
        /// Attribute or state name.
        #[arg(long)]
        state: String,
    },
    /// Exact deviant weights of N-replica outcome strings.
    Converge {
        /// Comma list of amplitudes: decimals, `p/q` or `sqrt(p/q)`.
        #[arg(long, allow_hyphen_values = true)]
        amplitudes: String,
        #[arg(long = "N-sweep", value_delimiter = ',', required = true)]
        n_sweep: Vec<usize>,
        #[arg(long)]
        epsilon: String,
        /// Also require the last deviant weight to fall below this bound.
        #[arg(long)]
        bound: Option<f64>,
        /// Write the table to this file as well.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Value of a game from its partition of unity and payoffs.
    Value {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        payoffs: String,
    },
    /// Step-by-step derivation of the value for weights m/n, (n-m)/n.
    Derive {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        payoffs: String,
    },
    /// Decision-support conditions for a pair of observables.
    DecisionSupport {
        spec: PathBuf,
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckModel { .. } => "check-model",
            Command::Predict { .. } => "predict",
            Command::Converge { .. } => "converge",
            Command::Value { .. } => "value",
            Command::Derive { .. } => "derive",
            Command::DecisionSupport { .. } => "decision-support",
        }
    }

    fn input_file(&self) -> Option<&Path> {
        match self {
            Command::CheckModel { spec } | Command::Predict { spec, .. } | Command::DecisionSupport { spec, .. } => {
                Some(spec)
            }
            _ => None,
        }
    }
}

fn run(command: &Command, out: &mut impl Write) -> Result<Vec<report::Verdict>, CommandError> {
    match command {
        Command::CheckModel { spec } => commands::check_model(&parse_model_spec(spec)?.0, out),
        Command::Predict { spec, observable, state } => {
            commands::predict(&parse_model_spec(spec)?.0, observable, state, out)
        }
        Command::Converge { amplitudes, n_sweep, epsilon, bound, csv } => commands::converge(
            &ConvergeArgs { amplitudes, n_sweep, epsilon, bound: *bound, csv: csv.as_deref() },
            out,
        ),
        Command::Value { weights, payoffs } => commands::value(weights, payoffs, out),
        Command::Derive { m, n, payoffs } => commands::derive(*m, *n, payoffs, out),
        Command::DecisionSupport { spec, x, y } => {
            let pair = x.clone().zip(y.clone()).map(|(a, b)| [a, b]);
            commands::decision_support(&parse_model_spec(spec)?.0, pair, out)
        }
    }
}

fn apply_tolerance_override() -> Result<(), String> {
    match std::env::var("CT_TOL") {
        Ok(text) => {
            let v: f64 = text.trim().parse().map_err(|_| format!("CT_TOL is not a number: `{text}`"))?;
            if superinfo_core::set_tol(v) {
                Ok(())
            } else {
                Err(format!("CT_TOL must be positive and finite, got {v}"))
            }
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(format!("CT_TOL: {e}")),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = Cli::parse();
    let name = cli.command.name();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs: Vec<Vec<u8>> = cli.command.input_file().and_then(|p| std::fs::read(p).ok()).into_iter().collect();
    let digest = digest(&args, &inputs);

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = apply_tolerance_override().map_err(CommandError::Input).and_then(|_| run(&cli.command, &mut out));
    let report = match result {
        Ok(verdicts) => RunReport::finished(name, digest, verdicts, started.elapsed()),
        Err(e) => {
            eprintln!("error: {e}");
            RunReport::invalid(name, digest, e.to_string(), started.elapsed())
        }
    };
    let _ = out.flush();
    if let Some(path) = &cli.report {
        let written = serde_json::to_string_pretty(&report)
            .map_err(|e| e.to_string())
            .and_then(|json| std::fs::write(path, json + "\n").map_err(|e| e.to_string()));
        if let Err(e) = written {
            eprintln!("error: cannot write report to {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    for v in report.verdicts.iter().filter(|v| !v.pass) {
        eprintln!("verdict failed: {}", v.name);
    }
    ExitCode::from(report.exit_code as u8)
}
