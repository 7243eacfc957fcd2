//! Effective run configuration: defaults, overlaid by an optional flat JSON
//! config file, overlaid by explicit command-line flags.

use serde::{Deserialize, Serialize};

use qpt_core::epr::EprAngles;
use qpt_core::propagator::PumpPhase;
use qpt_core::sweep::{AngleSpec, GridRange, ObservableSet, SweepSpec};

use crate::CliError;

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Log transform applied to value columns at emission; raw values are always
/// what the sweep stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum LogScale {
    /// raw values
    #[value(name = "none")]
    None,
    /// log base 4 (quadrature-variance plots; vacuum 1/4 maps to -1)
    #[value(name = "log4")]
    Log4,
    /// sign-split lg: log10(v+1) for v >= 0, -log10(|v|+1) for v < 0
    #[value(name = "lg_nf_split")]
    LgNfSplit,
    /// log10(v+1) (inverse variances, Fisher information)
    #[value(name = "log10_plus1")]
    Log10Plus1,
}

/// Flat config-file schema; unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub b: Option<Vec<f64>>,
    pub kappa: Option<f64>,
    pub l_min: Option<f64>,
    pub l_max: Option<f64>,
    pub steps: Option<usize>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub lo_phase_s: Option<f64>,
    pub theta_plus_phi_grid: Option<usize>,
    pub pump_phase: Option<String>,
    pub output: Option<String>,
    pub format: Option<String>,
    pub log_scale: Option<String>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading config {path}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("config {path}: {e}")))
    }
}

/// Sweep-related command-line flags; every field optional so that explicit
/// flags can be told apart from defaults when overlaying the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct SweepArgs {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<String>,
    /// Comma-separated gain ratios b = g/(2 kappa)
    #[arg(long, value_delimiter = ',')]
    pub b: Option<Vec<f64>>,
    /// FWM conversion rate per unit length
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Lower end of the dimensionless length grid (2*kappa*l)
    #[arg(long)]
    pub l_min: Option<f64>,
    /// Upper end of the dimensionless length grid (2*kappa*l)
    #[arg(long)]
    pub l_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub steps: Option<usize>,
    /// Coherent seed amplitude for sensing observables
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Idler local-oscillator angle (radians)
    #[arg(long)]
    pub theta: Option<f64>,
    /// Signal local-oscillator angle (radians)
    #[arg(long)]
    pub lo_phase_s: Option<f64>,
    /// Sweep theta+phi over this many points in [0, 2pi) instead of fixing it
    #[arg(long)]
    pub theta_plus_phi_grid: Option<usize>,
    /// Pump phase: 0 or pi/2
    #[arg(long, value_parser = parse_pump_phase)]
    pub pump_phase: Option<PumpPhase>,
    /// Output path ("-" for stdout)
    #[arg(short, long)]
    pub output: Option<String>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Log transform applied at emission
    #[arg(long, value_enum)]
    pub log_scale: Option<LogScale>,
    /// Worker-pool cap (overrides QPT_SIM_THREADS)
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_pump_phase(s: &str) -> Result<PumpPhase, String> {
    match s {
        "0" => Ok(PumpPhase::Zero),
        "pi/2" | "pi2" | "halfpi" => Ok(PumpPhase::HalfPi),
        other => Err(format!("pump phase must be 0 or pi/2, got {other}")),
    }
}

fn pump_phase_from_str(s: &str) -> Result<PumpPhase, CliError> {
    parse_pump_phase(s).map_err(CliError::Spec)
}

fn format_from_str(s: &str) -> Result<Format, CliError> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(CliError::Spec(format!("format must be csv or json, got {other}"))),
    }
}

fn log_scale_from_str(s: &str) -> Result<LogScale, CliError> {
    match s {
        "none" => Ok(LogScale::None),
        "log4" => Ok(LogScale::Log4),
        "lg_nf_split" => Ok(LogScale::LgNfSplit),
        "log10_plus1" => Ok(LogScale::Log10Plus1),
        other => Err(CliError::Spec(format!("unknown log_scale {other}"))),
    }
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone)]
pub struct EffectiveConfig {
    pub b: Vec<f64>,
    pub kappa: f64,
    pub l_min: f64,
    pub l_max: f64,
    pub steps: usize,
    pub alpha: f64,
    pub theta: f64,
    pub lo_phase_s: f64,
    pub theta_plus_phi_grid: Option<usize>,
    pub pump_phase: PumpPhase,
    pub output: String,
    pub format: Format,
    pub log_scale: LogScale,
    pub threads: Option<usize>,
}

impl EffectiveConfig {
    /// defaults <- config file <- flags
    pub fn resolve(args: &SweepArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::resolve_with(args, file)
    }

    pub fn resolve_with(args: &SweepArgs, file: FileConfig) -> Result<Self, CliError> {
        let pump_phase = match &args.pump_phase {
            Some(p) => *p,
            None => match &file.pump_phase {
                Some(s) => pump_phase_from_str(s)?,
                None => PumpPhase::Zero,
            },
        };
        let format = match &args.format {
            Some(f) => *f,
            None => match &file.format {
                Some(s) => format_from_str(s)?,
                None => Format::Csv,
            },
        };
        let log_scale = match &args.log_scale {
            Some(l) => *l,
            None => match &file.log_scale {
                Some(s) => log_scale_from_str(s)?,
                None => LogScale::None,
            },
        };
        let threads = args.threads.or_else(|| {
            std::env::var("QPT_SIM_THREADS").ok().and_then(|v| v.parse().ok())
        });
        Ok(EffectiveConfig {
            b: args.b.clone().or(file.b).unwrap_or_else(|| vec![0.0, 0.2, 0.5, 0.8, 1.0, 2.0]),
            kappa: args.kappa.or(file.kappa).unwrap_or(0.5),
            l_min: args.l_min.or(file.l_min).unwrap_or(0.01),
            l_max: args.l_max.or(file.l_max).unwrap_or(12.0),
            steps: args.steps.or(file.steps).unwrap_or(600),
            alpha: args.alpha.or(file.alpha).unwrap_or(10.0),
            theta: args.theta.or(file.theta).unwrap_or(1.5 * std::f64::consts::PI),
            lo_phase_s: args.lo_phase_s.or(file.lo_phase_s).unwrap_or(0.0),
            theta_plus_phi_grid: args.theta_plus_phi_grid.or(file.theta_plus_phi_grid),
            pump_phase,
            output: args.output.clone().or(file.output).unwrap_or_else(|| "-".into()),
            format,
            log_scale,
            threads,
        })
    }

    pub fn sweep_spec(&self, observables: ObservableSet) -> SweepSpec {
        let angles = match self.theta_plus_phi_grid {
            Some(steps) => AngleSpec::SumGrid { steps },
            None => AngleSpec::Fixed(EprAngles::new(self.theta, self.lo_phase_s)),
        };
        SweepSpec {
            b_values: self.b.clone(),
            kappa: self.kappa,
            length_grid: GridRange { start: self.l_min, stop: self.l_max, steps: self.steps },
            alpha: self.alpha,
            angles,
            observables,
            pump_phase: self.pump_phase,
        }
    }

    /// The effective configuration as the `meta.config` echo.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::json!({
            "b": self.b,
            "kappa": self.kappa,
            "l_min": self.l_min,
            "l_max": self.l_max,
            "steps": self.steps,
            "alpha": self.alpha,
            "theta": self.theta,
            "lo_phase_s": self.lo_phase_s,
            "theta_plus_phi_grid": self.theta_plus_phi_grid,
            "pump_phase": match self.pump_phase { PumpPhase::Zero => "0", PumpPhase::HalfPi => "pi/2" },
            "output": self.output,
            "format": match self.format { Format::Csv => "csv", Format::Json => "json" },
            "log_scale": match self.log_scale {
                LogScale::None => "none",
                LogScale::Log4 => "log4",
                LogScale::LgNfSplit => "lg_nf_split",
                LogScale::Log10Plus1 => "log10_plus1",
            },
        })
    }
}
