//! Coherent-seed expectations, susceptibilities to the conversion rate kappa,
//! inverse variances, and the quantum Fisher information in its closed and
//! covariance-matrix forms.
//!
//! Seed convention: the two-photon coherent input alpha_i = i alpha_s* =
//! sqrt(2) alpha e^{i pi/4} has Re = Im = alpha on both modes, and
//! <q> = Re(amplitude), <p> = Im(amplitude) for each port, so all four input
//! ports carry the same mean alpha. The bare factor alpha in the closed
//! susceptibilities pins this convention.

use num_complex::Complex64 as C64;

use crate::error::{QptError, Result};
use crate::observables::{cross_covariances, ep_eval, single_mode_variances};
use crate::params::{realize, PtParams, Trig, SING_TOL};

/// Coherent seed amplitude applied to every input port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSeed {
    alpha: f64,
}

impl CoherentSeed {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(QptError::NonFinite("alpha must be finite and nonnegative"));
        }
        Ok(Self { alpha })
    }

    pub fn vacuum() -> Self {
        Self { alpha: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Observable measured for kappa estimation: a single output quadrature or
/// one of the two-mode combinations d1, d2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensingObservable {
    Qi0,
    Pi0,
    Qsl,
    Psl,
    D1,
    D2,
}

impl SensingObservable {
    pub const ALL: [SensingObservable; 6] = [
        SensingObservable::Qi0,
        SensingObservable::Pi0,
        SensingObservable::Qsl,
        SensingObservable::Psl,
        SensingObservable::D1,
        SensingObservable::D2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SensingObservable::Qi0 => "qi0",
            SensingObservable::Pi0 => "pi0",
            SensingObservable::Qsl => "qsl",
            SensingObservable::Psl => "psl",
            SensingObservable::D1 => "d1",
            SensingObservable::D2 => "d2",
        }
    }
}

/// Everything a Cramer-Rao comparison needs for one observable at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingReport {
    pub chi: f64,
    pub variance: f64,
    pub inv_var: f64,
    pub qfi: f64,
    pub ratio: f64,
}

fn means_raw(p: &PtParams, l: f64, alpha: f64) -> Result<[f64; 4]> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let num_loss = t.e_loss * t.sin_eps - t.sin_bl;
    let num_gain = t.e_gain * t.sin_eps - t.sin_bl;
    Ok([
        alpha * realize(num_loss / t.s_act)?, // q_i(0)
        alpha * realize(num_gain / t.s_pas)?, // p_i(0)
        alpha * realize(num_loss / t.s_pas)?, // q_s(l)
        alpha * realize(num_gain / t.s_act)?, // p_s(l)
    ])
}

/// Output means (<q_i(0)>, <p_i(0)>, <q_s(l)>, <p_s(l)>) for the seeded input.
pub fn mean_quadratures(p: &PtParams, l: f64, seed: CoherentSeed) -> Result<[f64; 4]> {
    ep_eval(p, l, |q| means_raw(q, l, seed.alpha()))
}

/// d<obs>/dkappa at fixed (g, l, alpha) for the four single-mode quadratures,
/// as one closed quotient-rule form: numerators N = e^{+/-gl/2} sin(eps) -
/// sin(beta l) over the pair denominator S, with dN and dS taken through
/// d(beta)/dkappa = kappa/beta and d(eps)/dkappa = cos(eps)/beta.
fn chi_single_raw(p: &PtParams, l: f64, alpha: f64) -> Result<[f64; 4]> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let beta = p.beta();
    let kl = t.kl;
    let ce = t.cos_eps;
    let cos_act = (p.beta() * l + p.epsilon()).cos();
    let cos_pas = (p.epsilon() - p.beta() * l).cos();
    let mut out = [0.0; 4];
    // (gain sign, denominator, d(denominator-argument) factors)
    let cases: [(f64, C64, C64, C64); 4] = [
        (-1.0, t.s_act, cos_act, ce + kl), // q_i(0)
        (1.0, t.s_pas, cos_pas, ce - kl),  // p_i(0)
        (-1.0, t.s_pas, cos_pas, ce - kl), // q_s(l)
        (1.0, t.s_act, cos_act, ce + kl),  // p_s(l)
    ];
    for (i, (sign, s_den, c_den, karg)) in cases.iter().enumerate() {
        let e = if *sign > 0.0 { t.e_gain } else { t.e_loss };
        let n = e * t.sin_eps - t.sin_bl;
        let dn = e * ce * ce - kl * t.cos_bl;
        let chi = (dn / s_den - n * c_den * karg / (s_den * s_den)) / beta;
        out[i] = alpha * realize(chi)?;
    }
    Ok(out)
}

/// Susceptibility chi = d<obs>/dkappa; the two-mode ones are
/// (chi_qi0 + chi_qsl)/sqrt(2) and (chi_pi0 + chi_psl)/sqrt(2).
pub fn susceptibility(p: &PtParams, l: f64, seed: CoherentSeed, obs: SensingObservable) -> Result<f64> {
    let chi = ep_eval(p, l, |q| chi_single_raw(q, l, seed.alpha()))?;
    Ok(match obs {
        SensingObservable::Qi0 => chi[0],
        SensingObservable::Pi0 => chi[1],
        SensingObservable::Qsl => chi[2],
        SensingObservable::Psl => chi[3],
        SensingObservable::D1 => (chi[0] + chi[2]) / std::f64::consts::SQRT_2,
        SensingObservable::D2 => (chi[1] + chi[3]) / std::f64::consts::SQRT_2,
    })
}

fn observable_variance(p: &PtParams, l: f64, obs: SensingObservable) -> Result<f64> {
    let v = single_mode_variances(p, l)?;
    Ok(match obs {
        SensingObservable::Qi0 => v.qi0,
        SensingObservable::Pi0 => v.pi0,
        SensingObservable::Qsl => v.qsl,
        SensingObservable::Psl => v.psl,
        SensingObservable::D1 => 0.5 * (v.qi0 + v.qsl),
        SensingObservable::D2 => 0.5 * (v.pi0 + v.psl),
    })
}

/// Inverse variance of the kappa estimate through one observable,
/// chi^2 / Var[obs]. Coherent seeding leaves the variances unchanged.
pub fn inverse_variance(p: &PtParams, l: f64, seed: CoherentSeed, obs: SensingObservable) -> Result<f64> {
    let chi = susceptibility(p, l, seed, obs)?;
    Ok(chi * chi / observable_variance(p, l, obs)?)
}

fn qfi_closed_raw(p: &PtParams, l: f64, alpha: f64) -> Result<f64> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let g = p.g();
    let k = p.kappa();
    let beta = p.beta();
    let bl = beta * l;
    // g^2 - 4 k^2 cos^2(beta l) = -4 k^2 sin(eps+beta l) sin(eps-beta l);
    // its zero set is the union of the two singular families.
    let den_core = g * g - 4.0 * k * k * t.cos_bl * t.cos_bl;
    if den_core.norm() <= SING_TOL {
        return Err(QptError::SingularLength(den_core.norm()));
    }
    let a1 = g * g * t.sin_bl - 4.0 * k * k * bl * t.cos_bl;
    let a2 = (2.0 * bl).sin() - 2.0 * bl;
    let den = beta * beta * den_core * den_core;
    let ch = t.gl.cosh();
    let noise_term = 4.0 * ((ch + 1.0) * a1 * a1 + 2.0 * g * g * k * k * a2 * a2) / den;
    let mean_term = 16.0 * alpha * alpha * (ch * a1 * a1 + g * g * k * k * a2 * a2) / den;
    realize(noise_term + mean_term)
}

/// Quantum Fisher information for estimating kappa, closed form (both the
/// alpha-independent and the alpha^2 terms).
pub fn qfi_closed(p: &PtParams, l: f64, seed: CoherentSeed) -> Result<f64> {
    ep_eval(p, l, |q| qfi_closed_raw(q, l, seed.alpha()))
}

/// QFI exactly at the exceptional point as a function of kappa*l.
pub fn qfi_at_ep(kappa: f64, l: f64, alpha: f64) -> f64 {
    let kl = kappa * l;
    let kl2 = kl * kl;
    let ch = (2.0 * kl).cosh();
    let noise = 4.0 * l * l * (9.0 * kl2 * kl2 - 6.0 * kl2 + 9.0 + (kl2 - 3.0) * (kl2 - 3.0) * ch);
    let mean = 16.0 * alpha * alpha * l * l * (4.0 * kl2 * kl2 + (kl2 - 3.0) * (kl2 - 3.0) * ch);
    (noise + mean) / (9.0 * (kl2 - 1.0) * (kl2 - 1.0))
}

type Mat4 = [[f64; 4]; 4];

fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

/// Covariance over the sensing basis (q_i(0), q_s(l), p_i(0), p_s(l)); this is
/// the EPR-module ordering with rows/columns 2 and 3 swapped.
fn sensing_covariance(p: &PtParams, l: f64) -> Result<Mat4> {
    let v = single_mode_variances(p, l)?;
    let (c1, c2) = cross_covariances(p, l)?;
    let mut m = [[0.0; 4]; 4];
    m[0][0] = v.qi0;
    m[1][1] = v.qsl;
    m[2][2] = v.pi0;
    m[3][3] = v.psl;
    m[0][3] = c1;
    m[3][0] = c1;
    m[1][2] = c2;
    m[2][1] = c2;
    Ok(m)
}

/// Inverts the sensing covariance through its exact 2x2 pair blocks
/// ((0,3) and (1,2)) and reports the spectral condition number.
fn invert_sensing_covariance(v: &Mat4) -> Result<(Mat4, f64)> {
    let mut inv = [[0.0; 4]; 4];
    let mut eig_min = f64::INFINITY;
    let mut eig_max = 0.0f64;
    for (i, j) in [(0usize, 3usize), (1, 2)] {
        let (a, c, d) = (v[i][i], v[i][j], v[j][j]);
        let det = a * d - c * c;
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + c * c).sqrt();
        eig_min = eig_min.min(mid - rad);
        eig_max = eig_max.max(mid + rad);
        if det <= 0.0 {
            return Err(QptError::IllConditioned(f64::INFINITY));
        }
        inv[i][i] = d / det;
        inv[j][j] = a / det;
        inv[i][j] = -c / det;
        inv[j][i] = -c / det;
    }
    let cond = eig_max / eig_min;
    if cond.is_nan() || cond > 1e12 {
        return Err(QptError::IllConditioned(cond));
    }
    Ok((inv, cond))
}

fn qfi_covariance_raw(p: &PtParams, l: f64, alpha: f64) -> Result<f64> {
    let g = p.g();
    let k = p.kappa();
    let h = 1e-6 * k;
    let seed_means = |kk: f64| -> Result<[f64; 4]> {
        let pp = PtParams::new(g, kk)?;
        let m = means_raw(&pp, l, alpha)?;
        Ok([m[0], m[2], m[1], m[3]]) // reorder to (qi0, qsl, pi0, psl)
    };
    let cov_at = |kk: f64| -> Result<Mat4> { sensing_covariance(&PtParams::new(g, kk)?, l) };

    // central difference with one Richardson refinement, step h
    let richardson4 = |f: &dyn Fn(f64) -> Result<Mat4>| -> Result<Mat4> {
        let (p1, m1) = (f(k + h)?, f(k - h)?);
        let (p2, m2) = (f(k + 0.5 * h)?, f(k - 0.5 * h)?);
        let mut out = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let dh = (p1[r][c] - m1[r][c]) / (2.0 * h);
                let dh2 = (p2[r][c] - m2[r][c]) / h;
                out[r][c] = (4.0 * dh2 - dh) / 3.0;
            }
        }
        Ok(out)
    };
    let dv = richardson4(&cov_at)?;
    let dmu = {
        let (p1, m1) = (seed_means(k + h)?, seed_means(k - h)?);
        let (p2, m2) = (seed_means(k + 0.5 * h)?, seed_means(k - 0.5 * h)?);
        let mut out = [0.0; 4];
        for i in 0..4 {
            let dh = (p1[i] - m1[i]) / (2.0 * h);
            let dh2 = (p2[i] - m2[i]) / h;
            out[i] = (4.0 * dh2 - dh) / 3.0;
        }
        out
    };
    let v = sensing_covariance(p, l)?;
    let (vinv, _cond) = invert_sensing_covariance(&v)?;
    let m = mat4_mul(&vinv, &dv);
    let mm = mat4_mul(&m, &m);
    let trace: f64 = (0..4).map(|i| mm[i][i]).sum();
    let mut mean_term = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            mean_term += dmu[r] * vinv[r][c] * dmu[c];
        }
    }
    Ok(0.5 * trace + mean_term)
}

/// QFI from the Gaussian covariance formula, with dV/dkappa and dmu/dkappa by
/// Richardson-refined central differences. Cross-check of [`qfi_closed`].
pub fn qfi_covariance(p: &PtParams, l: f64, seed: CoherentSeed) -> Result<f64> {
    ep_eval(p, l, |q| qfi_covariance_raw(q, l, seed.alpha()))
}

/// Bundles susceptibility, variance, inverse variance, QFI and the
/// Cramer-Rao ratio for one observable.
///
/// Remark (documented, not asserted): the d1 accuracy is conjectured to reach
/// its global optimum at the trough index n solving
/// 4*n*pi*exp(-n*g*pi/beta) = beta/kappa; the ratio columns of a sweep let
/// this be inspected directly.
pub fn crlb_report(p: &PtParams, l: f64, seed: CoherentSeed, obs: SensingObservable) -> Result<SensingReport> {
    let chi = susceptibility(p, l, seed, obs)?;
    let variance = observable_variance(p, l, obs)?;
    let inv_var = chi * chi / variance;
    let qfi = qfi_closed(p, l, seed)?;
    let ratio = if qfi > 0.0 { inv_var / qfi } else { 0.0 };
    Ok(SensingReport { chi, variance, inv_var, qfi, ratio })
}
