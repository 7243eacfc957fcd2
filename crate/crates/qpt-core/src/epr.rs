//! Generalized-quadrature EPR criteria, the output covariance matrix, and the
//! logarithmic negativity.
//!
//! The idler is measured at z = 0 with local-oscillator angle `theta`, the
//! signal at z = l with angle `lo_phase_s`; all criteria depend on the angles
//! only through their sum.

use crate::error::{QptError, Result};
use crate::observables::{cross_covariances, ep_eval, single_mode_variances, EpMean};
use crate::params::{realize, PtParams, Trig};

/// Local-oscillator angles of the two homodyne detectors (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprAngles {
    /// Idler LO angle.
    pub theta: f64,
    /// Signal LO angle.
    pub lo_phase_s: f64,
}

impl EprAngles {
    pub fn new(theta: f64, lo_phase_s: f64) -> Self {
        Self { theta, lo_phase_s }
    }

    /// The only combination the criteria depend on.
    pub fn sum(&self) -> f64 {
        self.theta + self.lo_phase_s
    }

    /// Angles reduced into [0, 2pi) for reporting; computations are periodic
    /// and never need this.
    pub fn reduced(&self) -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        Self { theta: self.theta.rem_euclid(tau), lo_phase_s: self.lo_phase_s.rem_euclid(tau) }
    }
}

/// Which EPR criterion a value satisfies: the stronger bound 1/2, the weaker
/// (inseparability) bound 1, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EprClass {
    Strong,
    Weak,
    NoViolation,
}

impl EprClass {
    fn of(v: f64) -> Self {
        if v < 0.5 {
            EprClass::Strong
        } else if v < 1.0 {
            EprClass::Weak
        } else {
            EprClass::NoViolation
        }
    }
}

/// The two generalized-quadrature variance sums and their classifications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprResult {
    pub et1: f64,
    pub et2: f64,
    pub et1_class: EprClass,
    pub et2_class: EprClass,
}

impl EpMean for EprResult {
    fn mean(a: Self, b: Self) -> Self {
        let et1 = 0.5 * (a.et1 + b.et1);
        let et2 = 0.5 * (a.et2 + b.et2);
        EprResult { et1, et2, et1_class: EprClass::of(et1), et2_class: EprClass::of(et2) }
    }
}

/// Optimal-phase EPR value and its Cauchy-Schwarz lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EprOptimal {
    pub value: f64,
    pub lower_bound: f64,
}

impl EpMean for EprOptimal {
    fn mean(a: Self, b: Self) -> Self {
        Self {
            value: 0.5 * (a.value + b.value),
            lower_bound: 0.5 * (a.lower_bound + b.lower_bound),
        }
    }
}

/// Mean vector and 4x4 covariance of the output quadratures over the basis
/// (q_i(0), p_i(0), q_s(l), p_s(l)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadCovariance {
    pub mean: [f64; 4],
    pub cov: [[f64; 4]; 4],
}

impl QuadCovariance {
    /// det of the idler block A, the signal block B and the cross block C in
    /// the (idler | signal) partition.
    fn block_dets(&self) -> (f64, f64, f64) {
        let v = &self.cov;
        let det_a = v[0][0] * v[1][1] - v[0][1] * v[0][1];
        let det_b = v[2][2] * v[3][3] - v[2][3] * v[2][3];
        let det_c = v[0][2] * v[1][3] - v[0][3] * v[1][2];
        (det_a, det_b, det_c)
    }

    /// Determinant of the full matrix, using the exact pairing structure
    /// (q_i, p_s) x (p_i, q_s) of this system.
    pub fn det(&self) -> f64 {
        let v = &self.cov;
        (v[0][0] * v[3][3] - v[0][3] * v[0][3]) * (v[1][1] * v[2][2] - v[1][2] * v[1][2])
    }

    /// Symplectic eigenvalues (nu_-, nu_+); physicality of the Gaussian state
    /// is nu_- >= 1/4 in the vacuum = 1/4 convention.
    pub fn symplectic_eigenvalues(&self) -> Result<(f64, f64)> {
        let (da, db, dc) = self.block_dets();
        let delta = da + db + 2.0 * dc;
        let disc = delta * delta - 4.0 * self.det();
        let scale = 1.0 + (da.abs() + db.abs() + 2.0 * dc.abs()).powi(2);
        if disc < -1e-12 * scale {
            return Err(QptError::NegativeDiscriminant(disc));
        }
        let root = disc.max(0.0).sqrt();
        Ok((((delta - root) / 2.0).max(0.0).sqrt(), ((delta + root) / 2.0).sqrt()))
    }
}

fn et_raw(p: &PtParams, l: f64, sum_sin: f64) -> Result<(f64, f64)> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let u1 = t.s_pas * t.s_pas;
    let u2 = t.s_act * t.s_act;
    let se = t.sin_eps;
    let s = t.sin_bl;
    let base = t.gl.cosh() * se * se + s * s;
    let cross = 2.0 * (0.5 * t.gl).cosh() * s * se * sum_sin;
    // (U1+U2)/(2 U1 U2) * X arranged as X/(2U1) + X/(2U2): at l = 0 each
    // quotient is a division of identical values, making ET = 1 exact.
    let x1 = base + cross;
    let x2 = base - cross;
    let et1 = realize(0.5 * (x1 / u1 + x1 / u2))?;
    let et2 = realize(0.5 * (x2 / u1 + x2 / u2))?;
    Ok((et1, et2))
}

/// The four generalized-quadrature variances
/// (Var[X1-Y1], Var[X2+Y2], Var[X1+Y1], Var[X2-Y2]) at the given LO angles.
pub fn epr_sum_variances(p: &PtParams, l: f64, angles: EprAngles) -> Result<[f64; 4]> {
    ep_eval(p, l, |q| {
        let t = Trig::new(q, l)?;
        t.require_both()?;
        let u1 = t.s_pas * t.s_pas;
        let u2 = t.s_act * t.s_act;
        let se = t.sin_eps;
        let s = t.sin_bl;
        let v1 = t.e_loss * t.e_loss * se * se + s * s;
        let v2 = t.e_gain * t.e_gain * se * se + s * s;
        let xi = 2.0 * se * s * (0.5 * t.gl).cosh();
        let (ct, st) = (angles.theta.cos(), angles.theta.sin());
        let (cp, sp) = (angles.lo_phase_s.cos(), angles.lo_phase_s.sin());
        let den = 4.0 * u1 * u2;
        let diag1 = v1 * (u1 * ct * ct + u2 * cp * cp) + v2 * (u2 * st * st + u1 * sp * sp);
        let diag2 = v1 * (u1 * st * st + u2 * sp * sp) + v2 * (u2 * ct * ct + u1 * cp * cp);
        let cross1 = 2.0 * xi * (u1 * sp * ct + u2 * cp * st);
        let cross2 = 2.0 * xi * (u1 * cp * st + u2 * sp * ct);
        Ok([
            realize((diag1 + cross1) / den)?,
            realize((diag2 + cross2) / den)?,
            realize((diag1 - cross1) / den)?,
            realize((diag2 - cross2) / den)?,
        ])
    })
}

/// ET_1 and ET_2 with their strong/weak classifications. The strong EPR
/// criterion is ET < 1/2, the weaker (Duan-Simon inseparability) ET < 1.
pub fn epr_criteria(p: &PtParams, l: f64, angles: EprAngles) -> Result<EprResult> {
    ep_eval(p, l, |q| {
        let (et1, et2) = et_raw(q, l, angles.sum().sin())?;
        Ok(EprResult { et1, et2, et1_class: EprClass::of(et1), et2_class: EprClass::of(et2) })
    })
}

/// ET at the optimal phases (theta+phi = 3pi/2 for ET_1, pi/2 for ET_2, where
/// the two coincide) together with its Cauchy-Schwarz lower bound.
pub fn epr_optimal(p: &PtParams, l: f64) -> Result<EprOptimal> {
    ep_eval(p, l, |q| {
        let t = Trig::new(q, l)?;
        t.require_both()?;
        let u1 = t.s_pas * t.s_pas;
        let u2 = t.s_act * t.s_act;
        let x = t.e_loss * t.sin_eps - t.sin_bl;
        let y = t.e_gain * t.sin_eps - t.sin_bl;
        let xy = x * x + y * y;
        let value = realize(xy / (4.0 * u1) + xy / (4.0 * u2))?;
        // the bound keeps the signed sine sin(beta*l - eps) = -s_pas
        let smb = -t.s_pas;
        let inner = x / (2.0 * smb) + y / (2.0 * t.s_act);
        let lower_bound = realize(inner * inner)?;
        Ok(EprOptimal { value, lower_bound })
    })
}

/// Assembles the output covariance matrix for the vacuum input: the main-text
/// variances on the diagonal and the (q_i, p_s) / (p_i, q_s) covariances as
/// the only off-diagonal entries.
pub fn covariance_matrix(p: &PtParams, l: f64) -> Result<QuadCovariance> {
    let v = single_mode_variances(p, l)?;
    let (c1, c2) = cross_covariances(p, l)?;
    let mut cov = [[0.0; 4]; 4];
    cov[0][0] = v.qi0;
    cov[1][1] = v.pi0;
    cov[2][2] = v.qsl;
    cov[3][3] = v.psl;
    cov[0][3] = c1;
    cov[3][0] = c1;
    cov[1][2] = c2;
    cov[2][1] = c2;
    Ok(QuadCovariance { mean: [0.0; 4], cov })
}

/// eta extracted from an assembled covariance matrix, evaluated in the
/// cancellation-free form 2 det V / (Sigma + sqrt(Sigma^2 - 4 det V)).
pub fn eta_from_covariance(qc: &QuadCovariance) -> Result<f64> {
    let (da, db, dc) = qc.block_dets();
    let sigma = da + db - 2.0 * dc;
    let det_v = qc.det();
    let disc = sigma * sigma - 4.0 * det_v;
    // the -1e-12 guard is scaled by the cancellation-free magnitude of Sigma,
    // which sets the double-precision noise floor of the discriminant
    let scale = 1.0 + (da.abs() + db.abs() + 2.0 * dc.abs()).powi(2);
    if disc < -1e-12 * scale {
        return Err(QptError::NegativeDiscriminant(disc));
    }
    Ok((2.0 * det_v / (sigma + disc.max(0.0).sqrt())).max(0.0).sqrt())
}

/// Closed-form eta.
///
/// The textbook arrangement subtracts two nearly equal square roots; with
/// a = beta^2 and c = kappa^2 sin^2(beta l) the radicand rationalizes exactly
/// to (a - c)^4 over the conjugate sum, giving the stable equivalent
/// eta = |a - c| / (4 sqrt(P^2 + 4Q + 4R sqrt(S))).
pub fn eta_closed(p: &PtParams, l: f64) -> Result<f64> {
    ep_eval(p, l, |q| {
        let t = Trig::new(q, l)?;
        t.require_both()?;
        let a = q.beta() * q.beta();
        let k = q.kappa();
        let c = k * k * t.sin_bl * t.sin_bl;
        let ch = t.gl.cosh();
        let big_p = a + c;
        let big_q = a * c * ch;
        let big_r = k * (0.5 * t.gl).cosh();
        let big_s = (a * c / (k * k)) * (a * a + c * c + 2.0 * a * c * ch);
        let b_sum = big_p * big_p + 4.0 * big_q + 4.0 * big_r * big_s.sqrt();
        Ok(realize(a - c)?.abs() / (4.0 * realize(b_sum)?.sqrt()))
    })
}

/// Closed-form eta exactly at the exceptional point, as a function of
/// kappa*l.
pub fn eta_at_ep(kappa: f64, l: f64) -> f64 {
    let kl = kappa * l;
    let kl2 = kl * kl;
    let num = (kl2 + 1.0) * (kl2 + 1.0)
        + 4.0 * (kl2 * (2.0 * kl).cosh()
            - kl * kl.cosh() * (1.0 + kl2 * kl2 + 2.0 * kl2 * (2.0 * kl).cosh()).sqrt());
    (num / (16.0 * (kl2 - 1.0) * (kl2 - 1.0))).sqrt()
}

/// ET_1/ET_2 exactly at the exceptional point for a given sin(theta+phi).
pub fn et_at_ep(kappa: f64, l: f64, sum_sin: f64) -> (f64, f64) {
    let kl = kappa * l;
    let kl2 = kl * kl;
    let pre = (-2.0 * kl).exp() * (kl2 + 1.0) / (2.0 * (kl2 - 1.0) * (kl2 - 1.0));
    let base = 1.0 + (4.0 * kl).exp() + 2.0 * kl2 * (2.0 * kl).exp();
    let cross = 2.0 * kl * kl.exp() * ((2.0 * kl).exp() + 1.0) * sum_sin;
    (pre * (base + cross), pre * (base - cross))
}

/// Logarithmic negativity E_N = max(0, -ln 4 eta) from the covariance route.
pub fn log_negativity(p: &PtParams, l: f64) -> Result<f64> {
    let eta = eta_from_covariance(&covariance_matrix(p, l)?)?;
    Ok((-(4.0 * eta).ln()).max(0.0))
}
