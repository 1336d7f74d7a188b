use std::path::PathBuf;
use std::process::ExitCode;

use abel_cli::commands::{
    self, AbelPowerOptions, CertifyOptions, CesaroOptions, MatrixSource, OscillatorOptions, SemigroupOptions,
};
use abel_cli::{serialize_matrix, write_history_csv, CliError, Report};
use clap::{Args, Parser, Subcommand};

/// Abel averages, power-convergence certificates and the oscillator model.
#[derive(Parser)]
#[command(name = "abel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Operator input: a matrix file, or a generated instance when `--seed` is given.
#[derive(Args)]
struct MatrixArgs {
    /// JSON matrix file {"rows", "cols", "data": [[re, im], ...]}
    path: Option<PathBuf>,
    /// Generate the operator from this seed instead of reading a file
    #[arg(long)]
    seed: Option<u64>,
    /// Generator family: holds, jordan_at_one, spectrum_escapes, stable_generator, numerical_range
    #[arg(long, default_value = "holds")]
    kind: String,
    /// Dimension of a generated operator
    #[arg(long, default_value_t = 6)]
    dim: usize,
}

impl MatrixArgs {
    fn source(self) -> Result<MatrixSource, CliError> {
        match (self.path, self.seed) {
            (Some(path), None) => Ok(MatrixSource::File(path)),
            (None, Some(seed)) => Ok(MatrixSource::Generated { seed, kind: self.kind, dim: self.dim }),
            (Some(_), Some(_)) => Err(CliError::Input("give either a matrix file or --seed, not both".into())),
            (None, None) => Err(CliError::Input("a matrix file or --seed is required".into())),
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check both sides of the power-convergence equivalence for T
    Certify {
        #[command(flatten)]
        input: MatrixArgs,
        /// Averaging parameter in (0, 1); repeatable (default 0.1, 0.5, 0.9)
        #[arg(long = "alpha")]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Relative singular-value cutoff (default n·ε)
        #[arg(long)]
        rank_tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Iterate powers of the Abel average A_α
    AbelPower {
        #[command(flatten)]
        input: MatrixArgs,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 60)]
        max_doublings: u32,
        /// CSV file for the convergence history (header "exponent,defect")
        #[arg(long)]
        history: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cesàro mean of the first N powers and a finite sup sweep
    Cesaro {
        #[command(flatten)]
        input: MatrixArgs,
        #[arg(long = "n", default_value_t = 100_000)]
        n: u64,
        /// Horizon of the sup_N ‖C_N‖ sweep (capped at N)
        #[arg(long, default_value_t = 1000)]
        sweep: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        rank_tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Continuous Abel average of exp(tB): closed form, quadrature, bridge to T = I + B
    Semigroup {
        #[command(flatten)]
        input: MatrixArgs,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Power of the average checked against its integral form
        #[arg(long = "n", default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value_t = 40.0)]
        t_max_factor: f64,
        /// gauss_laguerre or truncated_simpson
        #[arg(long, default_value = "gauss_laguerre")]
        scheme: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Resolvent gaps, C(λ) and Hermite checks for the diagonal oscillator model
    Oscillator {
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long, default_value_t = 10_000)]
        truncation: usize,
        /// Check Hermite modes 0..=this on the grid
        #[arg(long, default_value_t = 10)]
        hermite_max: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write a generated operator as a matrix file
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "holds")]
        kind: String,
        #[arg(long, default_value_t = 6)]
        dim: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn emit(text: &str, out: &OutArgs) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &Report, out: &OutArgs) -> Result<(), CliError> {
    emit(&report.render(), out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Certify { input, alphas, tol, rank_tol, out } => {
            let report = commands::certify(&input.source()?, &CertifyOptions { alphas, tol, rank_tol })?;
            emit_report(&report, &out)
        }
        Command::AbelPower { input, alpha, tol, max_doublings, history, out } => {
            let (mut report, rows) =
                commands::abel_power(&input.source()?, &AbelPowerOptions { alpha, tol, max_doublings })?;
            if let Some(path) = history {
                write_history_csv(&path, &rows)?;
                report.history_csv_path = Some(path.display().to_string());
            }
            emit_report(&report, &out)
        }
        Command::Cesaro { input, n, sweep, tol, rank_tol, out } => {
            let report = commands::cesaro(&input.source()?, &CesaroOptions { n, sweep, tol, rank_tol })?;
            emit_report(&report, &out)
        }
        Command::Semigroup { input, lambda, n, nodes, t_max_factor, scheme, tol, out } => {
            let opts = SemigroupOptions { lambda, n, nodes, t_max_factor, scheme, tol };
            emit_report(&commands::semigroup(&input.source()?, &opts)?, &out)
        }
        Command::Oscillator { lambda, m, truncation, hermite_max, out } => {
            let opts = OscillatorOptions { lambda, m, truncation, hermite_max, ..OscillatorOptions::default() };
            emit_report(&commands::oscillator(&opts)?, &out)
        }
        Command::Generate { seed, kind, dim, out } => {
            emit(&serialize_matrix(&commands::generated_matrix(seed, &kind, dim)?), &out)
        }
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with exit status 2 on its own
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
