//! `qpt-sim`: sweeps, figure-data reproduction and self-verification for the
//! twin-beam quadrature-PT simulation library.

mod config;
mod emit;
mod figures;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use qpt_core::sweep::{run_sweep, ObservableSet};
use qpt_core::verify::{run_verification, GridScale};

use config::{EffectiveConfig, FileConfig, SweepArgs};

/// CLI-level error with its exit code: 1 verification failure, 2 spec/config,
/// 3 I/O.
#[derive(Debug)]
pub enum CliError {
    Verify,
    Spec(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify => 1,
            CliError::Spec(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Verify => write!(f, "verification failed"),
            CliError::Spec(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "qpt-sim", version, about = "Twin-beam quadrature-PT noise, entanglement and sensing tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-mode quadrature variances (q_i(0), p_s(l), q_s(l), p_i(0))
    Variances(SweepArgs),
    /// Two-mode homodyne variances d1, d2
    Homodyne2(SweepArgs),
    /// Relative-intensity noise figure
    Nf(SweepArgs),
    /// Quantum-mechanical correlation coefficients
    Corr(SweepArgs),
    /// EPR criteria ET1/ET2
    Epr(SweepArgs),
    /// eta and logarithmic negativity
    Negativity(SweepArgs),
    /// Inverse variances, QFI and Cramer-Rao ratios
    Sensing(SweepArgs),
    /// Quantum Fisher information
    Qfi(SweepArgs),
    /// Reproduce the data behind a named figure
    Figure {
        /// one of: fig2, fig3a, fig3b, fig4, s_homodyne, s_nf, s_epr_grid,
        /// s_susceptibility, s_inverse_variance, s_two_mode_sensing, s_near_ep
        id: String,
        #[command(flatten)]
        args: SweepArgs,
    },
    /// Run the oracle-vs-closed-form verification suite
    Verify {
        #[arg(long, default_value = "small", value_parser = parse_grid)]
        grid: GridScale,
    },
}

fn parse_grid(s: &str) -> Result<GridScale, String> {
    match s {
        "small" => Ok(GridScale::Small),
        "full" => Ok(GridScale::Full),
        other => Err(format!("grid must be small or full, got {other}")),
    }
}

fn run_family(args: &SweepArgs, observables: ObservableSet) -> Result<(), CliError> {
    let cfg = EffectiveConfig::resolve(args)?;
    run_resolved(&cfg, observables, &[])
}

fn run_resolved(
    cfg: &EffectiveConfig,
    observables: ObservableSet,
    assumptions: &[String],
) -> Result<(), CliError> {
    let start = Instant::now();
    let spec = cfg.sweep_spec(observables);
    let res = run_sweep(&spec, cfg.threads).map_err(|e| CliError::Spec(e.to_string()))?;
    let rows = emit::emit(&cfg.output, &res, cfg.log_scale, cfg.format, cfg.echo(), assumptions)?;
    eprintln!(
        "rows={rows} masked={} elapsed={:.3}s",
        res.meta.masked_points,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn run_figure(id: &str, args: &SweepArgs) -> Result<(), CliError> {
    let fig = figures::find(id)
        .ok_or_else(|| CliError::Spec(format!("unknown figure id: {id}")))?;
    let file: FileConfig = serde_json::from_str(fig.config_json)
        .map_err(|e| CliError::Spec(format!("figure config {id}: {e}")))?;
    let mut cfg = EffectiveConfig::resolve_with(args, file)?;
    if args.output.is_none() {
        cfg.output = format!("{id}.csv");
        if matches!(cfg.format, config::Format::Json) {
            cfg.output = format!("{id}.json");
        }
    }
    let assumptions: Vec<String> = fig.assumptions.iter().map(|s| s.to_string()).collect();
    run_resolved(&cfg, fig.observables, &assumptions)
}

fn run_verify(grid: GridScale) -> Result<(), CliError> {
    let start = Instant::now();
    let report = run_verification(grid);
    for c in &report.checks {
        println!(
            "{:<26} {}  worst {:>12.3e}  tol {:>8.1e}{}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.worst,
            c.tol,
            if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) }
        );
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!(
        "{} checks, {} failed, {:.2}s",
        report.checks.len(),
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        return Err(CliError::Verify);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Variances(a) => run_family(a, ObservableSet::Variances),
        Command::Homodyne2(a) => run_family(a, ObservableSet::TwoModeHomodyne),
        Command::Nf(a) => run_family(a, ObservableSet::NoiseFigure),
        Command::Corr(a) => run_family(a, ObservableSet::Correlations),
        Command::Epr(a) => run_family(a, ObservableSet::Epr),
        Command::Negativity(a) => run_family(a, ObservableSet::Negativity),
        Command::Sensing(a) => run_family(a, ObservableSet::InverseVariances),
        Command::Qfi(a) => run_family(a, ObservableSet::Qfi),
        Command::Figure { id, args } => run_figure(id, args),
        Command::Verify { grid } => run_verify(*grid),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Verify) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}
