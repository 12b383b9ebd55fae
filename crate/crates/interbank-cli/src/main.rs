//! `interbank` — experiment runner and analytic queries for the N-bank
//! lending model.
//!
//! Two subcommands:
//!
//! * `interbank run <experiment> [--out-dir DIR] [flags]` simulates or
//!   evaluates one named experiment and writes CSV files plus a
//!   `manifest.csv` (parameters, seed, step, version, and a SHA-256 hash
//!   per file). Identical invocations produce byte-identical outputs.
//! * `interbank query <name> [flags]` prints one analytic quantity with
//!   12 significant digits.
//!
//! Parameters resolve in fixed precedence: built-in experiment presets,
//! then a `--config` file (`key = value` lines), then individual flags.
//! Exit codes: 0 on success, 2 for invalid input (flags, config, parameter
//! ranges, unknown names), 1 for runtime failures (I/O and similar).

mod experiments;
mod queries;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use interbank::config::{parse_config, ParamPatch};
use interbank::model::{EquilibriumMode, ModelParams};

#[derive(Parser)]
#[command(
    name = "interbank",
    version,
    about = "Simulation and analytics for the N-bank interbank lending model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV outputs plus a manifest.
    ///
    /// Experiments: trajectories, loss-dist, common-noise, riccati-compare,
    /// value-compare, eta-horizon, effective-rate-scan.
    Run {
        /// Experiment name.
        experiment: String,
        /// Output directory (created if missing).
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Master seed; per-path seeds derive from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Time step (default: horizon / 10⁴).
        #[arg(long)]
        dt: Option<f64>,
        /// Monte Carlo path count for simulation experiments.
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// Policy for the primary trajectory dump: uncontrolled,
        /// independent, equilibrium-open, equilibrium-closed, or
        /// equilibrium-mfg.
        #[arg(long)]
        policy: Option<String>,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Print one analytic quantity with 12 significant digits.
    ///
    /// Names: p, systemic-prob, systemic-limit, ld-rate, eta, eta-bar, mu,
    /// gain, A, A-bar, value.
    Query {
        /// Quantity name.
        name: String,
        /// Evaluation time for time-dependent quantities.
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Equilibrium mode: open, closed, or mfg.
        #[arg(long, default_value = "closed")]
        mode: String,
        /// Deviation x̄ − xⁱ for the value query.
        #[arg(long, default_value_t = 0.0)]
        mean_dev: f64,
        #[command(flatten)]
        params: ParamFlags,
    },
}

/// Model parameters as flags, each optional (unset = inherited).
#[derive(Args)]
struct ParamFlags {
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of banks N.
    #[arg(long)]
    n_banks: Option<usize>,
    /// Baseline mean-reversion (lending) rate a ≥ 0.
    #[arg(long)]
    a: Option<f64>,
    /// Incentive weight q ≥ 0 on borrowing toward the mean.
    #[arg(long)]
    q: Option<f64>,
    /// Running deviation penalty ε (requires q² ≤ ε).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Terminal deviation weight c ≥ 0.
    #[arg(long)]
    c: Option<f64>,
    /// Diffusion scale σ > 0.
    #[arg(long)]
    sigma: Option<f64>,
    /// Common-noise loading ρ in [−1, 1].
    #[arg(long)]
    rho: Option<f64>,
    /// Time horizon T > 0.
    #[arg(long)]
    horizon: Option<f64>,
    /// Default barrier D < 0 on the log-reserve scale.
    #[arg(long)]
    default_level: Option<f64>,
}

/// Failures sorted by exit code: invalid input (2) vs runtime trouble (1).
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn validation(err: impl std::fmt::Display) -> Self {
        CliError::Validation(err.to_string())
    }

    fn runtime(err: impl std::fmt::Display) -> Self {
        CliError::Runtime(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::runtime(err)
    }
}

impl From<interbank::riccati::RiccatiError> for CliError {
    fn from(err: interbank::riccati::RiccatiError) -> Self {
        // Mode/terminal-cost restrictions are parameter-contract issues.
        CliError::validation(err)
    }
}

impl From<interbank::risk::RiskError> for CliError {
    fn from(err: interbank::risk::RiskError) -> Self {
        match err {
            interbank::risk::RiskError::CorrelationUnsupported { .. } => CliError::validation(err),
            other => CliError::runtime(other),
        }
    }
}

impl From<interbank::simulate::SimulationError> for CliError {
    fn from(err: interbank::simulate::SimulationError) -> Self {
        CliError::runtime(err)
    }
}

impl ParamFlags {
    fn patch(&self) -> ParamPatch {
        ParamPatch {
            n_banks: self.n_banks,
            a: self.a,
            q: self.q,
            epsilon: self.epsilon,
            c: self.c,
            sigma: self.sigma,
            rho: self.rho,
            horizon: self.horizon,
            default_level: self.default_level,
        }
    }

    /// Preset < config file < flags, then a single validation pass.
    fn resolve(&self, preset: ParamPatch) -> Result<ModelParams, CliError> {
        let mut params = preset.apply(ModelParams::default());
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            let patch = parse_config(&text).map_err(CliError::validation)?;
            params = patch.apply(params);
        }
        params = self.patch().apply(params);
        params.validate().map_err(CliError::validation)
    }
}

fn parse_mode(token: &str) -> Result<EquilibriumMode, CliError> {
    match token {
        "open" => Ok(EquilibriumMode::OpenLoop),
        "closed" => Ok(EquilibriumMode::ClosedLoop),
        "mfg" => Ok(EquilibriumMode::MeanFieldGame),
        other => Err(CliError::Validation(format!(
            "unknown mode '{other}' (expected open, closed, or mfg)"
        ))),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            experiment,
            out_dir,
            seed,
            dt,
            paths,
            policy,
            params,
        } => experiments::run(&experiment, &out_dir, seed, dt, paths, policy.as_deref(), &params),
        Command::Query {
            name,
            t,
            mode,
            mean_dev,
            params,
        } => {
            let params = params.resolve(ParamPatch::default())?;
            let mode = parse_mode(&mode)?;
            let value = queries::evaluate(&name, t, mean_dev, &params, mode)?;
            println!("{value:.11e}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
