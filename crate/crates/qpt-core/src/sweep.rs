//! Deterministic parameter-grid evaluation with optional parallelism.
//!
//! Rows are ordered lexicographically in (b, length, angle) no matter how the
//! work is scheduled; each (b)-block is one task writing into its pre-assigned
//! slot, so repeated runs are bitwise identical for any worker count.

use rayon::prelude::*;

use crate::epr::{self, EprAngles};
use crate::error::{QptError, Result};
use crate::observables::{self, QuadIndex};
use crate::params::PtParams;
use crate::propagator::PumpPhase;
use crate::sensing::{self, CoherentSeed, SensingObservable};

/// Inclusive uniform grid; points are start*(1-t) + stop*t with t = k/(steps-1)
/// so both endpoints are hit exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                let t = k as f64 / (n - 1) as f64;
                self.start * (1.0 - t) + self.stop * t
            })
            .collect()
    }
}

/// Angle handling for the EPR observable family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleSpec {
    /// Evaluate at one fixed pair of LO angles.
    Fixed(EprAngles),
    /// Sweep theta + phi over `steps` points covering [0, 2pi).
    SumGrid { steps: usize },
}

impl Default for AngleSpec {
    fn default() -> Self {
        // the optimal-correlation phase for ET_1
        AngleSpec::Fixed(EprAngles::new(1.5 * std::f64::consts::PI, 0.0))
    }
}

/// Which observable family a sweep evaluates; fixes the output columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableSet {
    Variances,
    TwoModeHomodyne,
    NoiseFigure,
    Correlations,
    Epr,
    Negativity,
    Susceptibilities,
    InverseVariances,
    Qfi,
}

impl ObservableSet {
    pub fn name(&self) -> &'static str {
        match self {
            ObservableSet::Variances => "variances",
            ObservableSet::TwoModeHomodyne => "homodyne2",
            ObservableSet::NoiseFigure => "nf",
            ObservableSet::Correlations => "corr",
            ObservableSet::Epr => "epr",
            ObservableSet::Negativity => "negativity",
            ObservableSet::Susceptibilities => "susceptibility",
            ObservableSet::InverseVariances => "sensing",
            ObservableSet::Qfi => "qfi",
        }
    }

    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            ObservableSet::Variances => &["var_qi0", "var_psl", "var_qsl", "var_pi0"],
            ObservableSet::TwoModeHomodyne => &["var_d1", "var_d2"],
            ObservableSet::NoiseFigure => &["nf"],
            ObservableSet::Correlations => &["c11", "c12", "c21", "c22"],
            ObservableSet::Epr => &["et1", "et2"],
            ObservableSet::Negativity => &["eta", "log_negativity"],
            ObservableSet::Susceptibilities => {
                &["chi_qi0", "chi_pi0", "chi_qsl", "chi_psl", "chi_d1", "chi_d2"]
            }
            ObservableSet::InverseVariances => &[
                "invvar_qi0",
                "invvar_pi0",
                "invvar_qsl",
                "invvar_psl",
                "invvar_d1",
                "invvar_d2",
                "qfi",
                "ratio_qi0",
                "ratio_pi0",
                "ratio_qsl",
                "ratio_psl",
                "ratio_d1",
                "ratio_d2",
            ],
            ObservableSet::Qfi => &["qfi"],
        }
    }

}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Gain ratios b = g/(2 kappa) to scan.
    pub b_values: Vec<f64>,
    pub kappa: f64,
    /// Dimensionless length grid in 2*kappa*l.
    pub length_grid: GridRange,
    /// Coherent seed amplitude for the sensing families.
    pub alpha: f64,
    pub angles: AngleSpec,
    pub observables: ObservableSet,
    pub pump_phase: PumpPhase,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.b_values.is_empty() {
            return Err(QptError::SpecError("at least one b value is required".into()));
        }
        if self.b_values.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(QptError::SpecError("b values must be finite and nonnegative".into()));
        }
        if !self.kappa.is_finite() || self.kappa <= 0.0 {
            return Err(QptError::SpecError(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.length_grid.steps < 2 {
            return Err(QptError::SpecError("length grid needs at least 2 steps".into()));
        }
        if !self.length_grid.start.is_finite()
            || !self.length_grid.stop.is_finite()
            || self.length_grid.start < 0.0
            || self.length_grid.stop <= self.length_grid.start
        {
            return Err(QptError::SpecError("length grid must satisfy 0 <= start < stop".into()));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(QptError::SpecError("alpha must be finite and nonnegative".into()));
        }
        if let AngleSpec::SumGrid { steps } = self.angles {
            if steps < 1 {
                return Err(QptError::SpecError("angle grid needs at least 1 step".into()));
            }
        }
        Ok(())
    }
}

/// One table cell: a value or the mask code of the error that prevented it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Masked(&'static str),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Masked(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub cells: Vec<Cell>,
}

/// Run metadata echoed into every emitted table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMeta {
    pub observable_set: &'static str,
    pub kappa: f64,
    pub alpha: f64,
    pub pump_phase: &'static str,
    pub b_values: Vec<f64>,
    pub masked_points: usize,
    pub version: &'static str,
    pub assumptions: Vec<String>,
}

/// Tabulated sweep output: row r corresponds to the lexicographic coordinate
/// tuple over `axes` (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub columns: Vec<Column>,
    pub meta: SweepMeta,
}

impl SweepResult {
    pub fn rows(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Coordinates of row `r` in axis order.
    pub fn coords(&self, r: usize) -> Vec<f64> {
        let mut idx = r;
        let mut out = vec![0.0; self.axes.len()];
        for (i, axis) in self.axes.iter().enumerate().rev() {
            let n = axis.values.len();
            out[i] = axis.values[idx % n];
            idx /= n;
        }
        out
    }

    /// Mask code of row `r`: the first masked cell's code, if any.
    pub fn row_mask(&self, r: usize) -> Option<&'static str> {
        self.columns.iter().find_map(|c| match c.cells[r] {
            Cell::Masked(code) => Some(code),
            Cell::Value(_) => None,
        })
    }
}

fn eval_point(
    params: &PtParams,
    two_kappa_l: f64,
    angle_sum: Option<f64>,
    spec: &SweepSpec,
) -> Vec<Result<f64>> {
    let l = two_kappa_l / (2.0 * spec.kappa);
    let seed = match CoherentSeed::new(spec.alpha) {
        Ok(s) => s,
        Err(e) => return vec![Err(e); spec.observables.columns().len()],
    };
    match spec.observables {
        ObservableSet::Variances => match observables::single_mode_variances(params, l) {
            Ok(v) => vec![Ok(v.qi0), Ok(v.psl), Ok(v.qsl), Ok(v.pi0)],
            Err(e) => vec![Err(e); 4],
        },
        ObservableSet::TwoModeHomodyne => match observables::two_mode_variances(params, l) {
            Ok((d1, d2)) => vec![Ok(d1), Ok(d2)],
            Err(e) => vec![Err(e); 2],
        },
        ObservableSet::NoiseFigure => vec![observables::noise_figure(params, l)],
        ObservableSet::Correlations => {
            use QuadIndex::{Amplitude, Phase};
            [
                (Amplitude, Amplitude),
                (Amplitude, Phase),
                (Phase, Amplitude),
                (Phase, Phase),
            ]
            .into_iter()
            .map(|(j, m)| observables::correlation_coefficient(params, l, j, m, spec.pump_phase))
            .collect()
        }
        ObservableSet::Epr => {
            let angles = match (angle_sum, spec.angles) {
                (Some(s), _) => EprAngles::new(s, 0.0),
                (None, AngleSpec::Fixed(a)) => a,
                (None, AngleSpec::SumGrid { .. }) => unreachable!("grid provides the angle"),
            };
            match epr::epr_criteria(params, l, angles) {
                Ok(r) => vec![Ok(r.et1), Ok(r.et2)],
                Err(e) => vec![Err(e); 2],
            }
        }
        ObservableSet::Negativity => match epr::covariance_matrix(params, l) {
            Ok(qc) => match epr::eta_from_covariance(&qc) {
                Ok(eta) => vec![Ok(eta), Ok((-(4.0 * eta).ln()).max(0.0))],
                Err(e) => vec![Err(e); 2],
            },
            Err(e) => vec![Err(e); 2],
        },
        ObservableSet::Susceptibilities => SensingObservable::ALL
            .into_iter()
            .map(|obs| sensing::susceptibility(params, l, seed, obs))
            .collect(),
        ObservableSet::InverseVariances => {
            let mut out: Vec<Result<f64>> = Vec::with_capacity(13);
            let reports: Vec<Result<sensing::SensingReport>> = SensingObservable::ALL
                .into_iter()
                .map(|obs| sensing::crlb_report(params, l, seed, obs))
                .collect();
            for r in &reports {
                out.push(r.as_ref().map(|x| x.inv_var).map_err(|e| e.clone()));
            }
            out.push(sensing::qfi_closed(params, l, seed));
            for r in &reports {
                out.push(r.as_ref().map(|x| x.ratio).map_err(|e| e.clone()));
            }
            out
        }
        ObservableSet::Qfi => vec![sensing::qfi_closed(params, l, seed)],
    }
}

/// Evaluates the sweep. `threads` caps the worker pool (None = rayon default);
/// output is identical for any worker count.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let lengths = spec.length_grid.values();
    let angle_values: Option<Vec<f64>> = match spec.angles {
        AngleSpec::SumGrid { steps } if spec.observables == ObservableSet::Epr => Some(
            (0..steps)
                .map(|k| 2.0 * std::f64::consts::PI * k as f64 / steps as f64)
                .collect(),
        ),
        _ => None,
    };
    let n_cols = spec.observables.columns().len();
    let rows_per_b = lengths.len() * angle_values.as_ref().map_or(1, |a| a.len());

    let eval_block = |&b: &f64| -> Result<Vec<Vec<Result<f64>>>> {
        let params = PtParams::from_ratio(b, spec.kappa)
            .map_err(|e| QptError::SpecError(format!("invalid b = {b}: {e}")))?;
        let mut block = Vec::with_capacity(rows_per_b);
        for &tkl in &lengths {
            match &angle_values {
                Some(avs) => {
                    for &s in avs {
                        block.push(eval_point(&params, tkl, Some(s), spec));
                    }
                }
                None => block.push(eval_point(&params, tkl, None, spec)),
            }
        }
        Ok(block)
    };

    // one task per b row-block, results reassembled in b order
    let blocks: Vec<Result<Vec<Vec<Result<f64>>>>> = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| QptError::SpecError(format!("thread pool: {e}")))?;
            pool.install(|| spec.b_values.par_iter().map(eval_block).collect())
        }
        None => spec.b_values.par_iter().map(eval_block).collect(),
    };

    let mut columns: Vec<Column> = spec
        .observables
        .columns()
        .iter()
        .map(|name| Column { name, cells: Vec::with_capacity(spec.b_values.len() * rows_per_b) })
        .collect();
    let mut masked_points = 0;
    for block in blocks {
        for row in block? {
            debug_assert_eq!(row.len(), n_cols);
            let mut any_masked = false;
            for (c, cell) in row.into_iter().enumerate() {
                columns[c].cells.push(match cell {
                    Ok(v) => {
                        debug_assert!(v.is_finite(), "unmasked cells must be finite");
                        Cell::Value(v)
                    }
                    Err(e) => {
                        any_masked = true;
                        Cell::Masked(e.mask_code())
                    }
                });
            }
            if any_masked {
                masked_points += 1;
            }
        }
    }

    let mut axes = vec![
        Axis { name: "b", values: spec.b_values.clone() },
        Axis { name: "two_kappa_l", values: lengths },
    ];
    if let Some(avs) = angle_values {
        axes.push(Axis { name: "theta_plus_phi", values: avs });
    }
    Ok(SweepResult {
        axes,
        columns,
        meta: SweepMeta {
            observable_set: spec.observables.name(),
            kappa: spec.kappa,
            alpha: spec.alpha,
            pump_phase: match spec.pump_phase {
                PumpPhase::Zero => "0",
                PumpPhase::HalfPi => "pi/2",
            },
            b_values: spec.b_values.clone(),
            masked_points,
            version: env!("CARGO_PKG_VERSION"),
            assumptions: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> SweepSpec {
        SweepSpec {
            b_values: vec![0.0, 0.2],
            kappa: 0.5,
            length_grid: GridRange { start: 0.01, stop: 12.0, steps: 600 },
            alpha: 0.0,
            angles: AngleSpec::default(),
            observables: ObservableSet::Variances,
            pump_phase: PumpPhase::Zero,
        }
    }

    #[test]
    fn shape_contract() {
        let res = run_sweep(&base_spec(), None).unwrap();
        assert_eq!(res.rows(), 2 * 600);
        assert_eq!(res.columns.len(), 4);
        assert_eq!(res.axes[0].values, vec![0.0, 0.2]);
        assert_eq!(res.axes[1].values.len(), 600);
        // endpoints hit exactly
        assert_eq!(res.axes[1].values[0], 0.01);
        assert_eq!(*res.axes[1].values.last().unwrap(), 12.0);
    }

    #[test]
    fn determinism_across_worker_counts() {
        let spec = base_spec();
        let a = run_sweep(&spec, Some(1)).unwrap();
        let b = run_sweep(&spec, Some(4)).unwrap();
        let c = run_sweep(&spec, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn masking_matches_predicted_singularities() {
        // b = 0: singular lengths at beta*l = pi/2 + n*pi, i.e. 2kl = pi + 2n*pi
        let mut spec = base_spec();
        spec.b_values = vec![0.0];
        let pi = std::f64::consts::PI;
        spec.length_grid = GridRange { start: pi - 1e-12, stop: pi + 1.0, steps: 2 };
        let res = run_sweep(&spec, None).unwrap();
        assert_eq!(res.row_mask(0), Some("SingularLength"));
        assert_eq!(res.row_mask(1), None);
        assert_eq!(res.meta.masked_points, 1);
    }

    #[test]
    fn no_unmasked_nonfinite_values() {
        let mut spec = base_spec();
        spec.observables = ObservableSet::NoiseFigure;
        spec.b_values = vec![0.2, 1.0, 2.0];
        spec.length_grid = GridRange { start: 0.0, stop: 12.0, steps: 300 };
        let res = run_sweep(&spec, None).unwrap();
        for col in &res.columns {
            for cell in &col.cells {
                if let Cell::Value(v) = cell {
                    assert!(v.is_finite());
                }
            }
        }
        // l = 0 has no photons: masked as DegenerateFlux, not an error
        assert_eq!(res.row_mask(0), Some("DegenerateFlux"));
    }

    #[test]
    fn epr_angle_axis_ordering() {
        let mut spec = base_spec();
        spec.observables = ObservableSet::Epr;
        spec.angles = AngleSpec::SumGrid { steps: 8 };
        spec.length_grid = GridRange { start: 0.5, stop: 3.0, steps: 5 };
        let res = run_sweep(&spec, None).unwrap();
        assert_eq!(res.axes.len(), 3);
        assert_eq!(res.rows(), 2 * 5 * 8);
        // row order: b slowest, angle fastest
        let c0 = res.coords(0);
        let c1 = res.coords(1);
        assert_eq!(c0[0], c1[0]);
        assert_eq!(c0[1], c1[1]);
        assert!(c1[2] > c0[2]);
    }

    #[test]
    fn spec_validation_errors() {
        let mut spec = base_spec();
        spec.b_values.clear();
        assert!(matches!(run_sweep(&spec, None), Err(QptError::SpecError(_))));
        let mut spec = base_spec();
        spec.length_grid.steps = 1;
        assert!(matches!(run_sweep(&spec, None), Err(QptError::SpecError(_))));
        let mut spec = base_spec();
        spec.kappa = -1.0;
        assert!(matches!(run_sweep(&spec, None), Err(QptError::SpecError(_))));
    }
}
