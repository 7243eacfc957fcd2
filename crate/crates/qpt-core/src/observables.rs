//! Noise observables of the vacuum-seeded system: single- and two-mode
//! quadrature variances, correlation coefficients, the relative-intensity
//! measurement coefficients, photon-number statistics and the noise figure.
//!
//! All quantities use the vacuum variance 1/4 convention ([q, p] = i/2) and
//! are complex-continued across the exceptional point, with the EP band
//! handled by the two-sided nudge of `PtParams::ep_nudged`.

use crate::error::{QptError, Result};
use crate::params::{realize, PtParams, Trig};
use crate::propagator::PumpPhase;

/// Variances of the four output quadratures, vacuum = 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeVariances {
    /// Var q_i(0) — active pair, de-amplified.
    pub qi0: f64,
    /// Var p_s(l) — active pair, amplified.
    pub psl: f64,
    /// Var q_s(l) — passive pair, de-amplified.
    pub qsl: f64,
    /// Var p_i(0) — passive pair, amplified.
    pub pi0: f64,
}

/// The six coefficients of the relative-intensity measurement decomposition
/// a_i(0) = A q_i(l) + iB p_i(l) + iC q_s(0) + D p_s(0),
/// a_s(l) = iD q_i(l) + C p_i(l) + E q_s(0) + iF p_s(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RismCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl RismCoefficients {
    /// Residuals of the four commutator-backed identities
    /// AB - CD = FE - CD = 1 and AC - DE = BD - FC = 0.
    pub fn identity_residuals(&self) -> [f64; 4] {
        [
            (self.a * self.b - self.c * self.d - 1.0).abs(),
            (self.f * self.e - self.c * self.d - 1.0).abs(),
            (self.a * self.c - self.d * self.e).abs(),
            (self.b * self.d - self.f * self.c).abs(),
        ]
    }
}

/// Photon-number variances and the cross covariance of the two output beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonNumberStats {
    pub var_ni: f64,
    pub var_ns: f64,
    pub covar: f64,
}

/// Which quadrature of a beam enters a correlation coefficient; index 1 of
/// the generalized quadratures is the amplitude (q-type), index 2 the phase
/// (p-type).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadIndex {
    Amplitude,
    Phase,
}

/// Evaluates `f` at the EP-band nudge pair and averages, or directly outside
/// the band. Every consumer here involves the passive denominator, so the
/// band evaluation first rejects lengths at the kappa*l = 1 divergence.
pub(crate) fn ep_eval<T, F>(p: &PtParams, l: f64, f: F) -> Result<T>
where
    F: Fn(&PtParams) -> Result<T>,
    T: EpMean,
{
    if let Some((lo, hi)) = p.ep_nudged() {
        p.ep_length_guard(l)?;
        Ok(T::mean(f(&lo)?, f(&hi)?))
    } else {
        f(p)
    }
}

/// Arithmetic mean used by the EP-band evaluation rule.
pub(crate) trait EpMean {
    fn mean(a: Self, b: Self) -> Self;
}

impl EpMean for f64 {
    fn mean(a: Self, b: Self) -> Self {
        0.5 * (a + b)
    }
}

impl<const N: usize> EpMean for [f64; N] {
    fn mean(a: Self, b: Self) -> Self {
        std::array::from_fn(|i| 0.5 * (a[i] + b[i]))
    }
}

impl EpMean for (f64, f64) {
    fn mean(a: Self, b: Self) -> Self {
        (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1))
    }
}

impl EpMean for SingleModeVariances {
    fn mean(a: Self, b: Self) -> Self {
        Self {
            qi0: 0.5 * (a.qi0 + b.qi0),
            psl: 0.5 * (a.psl + b.psl),
            qsl: 0.5 * (a.qsl + b.qsl),
            pi0: 0.5 * (a.pi0 + b.pi0),
        }
    }
}

impl EpMean for RismCoefficients {
    fn mean(a: Self, b: Self) -> Self {
        Self {
            a: 0.5 * (a.a + b.a),
            b: 0.5 * (a.b + b.b),
            c: 0.5 * (a.c + b.c),
            d: 0.5 * (a.d + b.d),
            e: 0.5 * (a.e + b.e),
            f: 0.5 * (a.f + b.f),
        }
    }
}

impl EpMean for PhotonNumberStats {
    fn mean(a: Self, b: Self) -> Self {
        Self {
            var_ni: 0.5 * (a.var_ni + b.var_ni),
            var_ns: 0.5 * (a.var_ns + b.var_ns),
            covar: 0.5 * (a.covar + b.covar),
        }
    }
}

fn variances_raw(p: &PtParams, l: f64) -> Result<SingleModeVariances> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let se2 = t.sin_eps * t.sin_eps;
    let s2 = t.sin_bl * t.sin_bl;
    let e2g = t.e_gain * t.e_gain;
    let e2l = t.e_loss * t.e_loss;
    let act2 = t.s_act * t.s_act;
    let pas2 = t.s_pas * t.s_pas;
    Ok(SingleModeVariances {
        qi0: realize((se2 * e2l + s2) / (4.0 * act2))?,
        psl: realize((se2 * e2g + s2) / (4.0 * act2))?,
        qsl: realize((se2 * e2l + s2) / (4.0 * pas2))?,
        pi0: realize((se2 * e2g + s2) / (4.0 * pas2))?,
    })
}

/// The four single-mode variances of the main closed forms.
pub fn single_mode_variances(p: &PtParams, l: f64) -> Result<SingleModeVariances> {
    ep_eval(p, l, |q| variances_raw(q, l))
}

/// Variances of the two-mode quadratures d1 = (q_i(0)+q_s(l))/sqrt(2) and
/// d2 = (p_i(0)+p_s(l))/sqrt(2); exactly the arithmetic means of the
/// single-mode variances because the constituent ports are uncorrelated.
pub fn two_mode_variances(p: &PtParams, l: f64) -> Result<(f64, f64)> {
    let v = single_mode_variances(p, l)?;
    Ok((0.5 * (v.qi0 + v.qsl), 0.5 * (v.pi0 + v.psl)))
}

fn cross_cov_raw(p: &PtParams, l: f64) -> Result<(f64, f64)> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let ch = (0.5 * t.gl).cosh();
    let num = t.sin_eps * t.sin_bl * ch;
    let c1 = realize(-num / (2.0 * t.s_act * t.s_act))?;
    let c2 = realize(-num / (2.0 * t.s_pas * t.s_pas))?;
    Ok((c1, c2))
}

/// The only nonzero cross covariances of the output state:
/// (Cov[q_i(0), p_s(l)], Cov[p_i(0), q_s(l)]).
pub(crate) fn cross_covariances(p: &PtParams, l: f64) -> Result<(f64, f64)> {
    ep_eval(p, l, |q| cross_cov_raw(q, l))
}

fn correlation_raw(p: &PtParams, l: f64) -> Result<f64> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    if t.sin_bl.norm() == 0.0 {
        return Ok(0.0);
    }
    let se2 = t.sin_eps * t.sin_eps;
    let s2 = t.sin_bl * t.sin_bl;
    let den = (se2 * se2 + s2 * s2 + 2.0 * t.gl.cosh() * se2 * s2).sqrt();
    let c = realize(2.0 * (0.5 * t.gl).cosh() * t.sin_eps * t.sin_bl / den)?;
    Ok(c.abs())
}

/// Quantum-mechanical correlation coefficient |C_jm| between the idler
/// quadrature X_j(0) and the signal quadrature Y_m(l).
///
/// For pump phase 0 only the cross pairs (j != m) correlate; for pump phase
/// pi/2 the pattern swaps and only the like pairs (j == m) do.
pub fn correlation_coefficient(
    p: &PtParams,
    l: f64,
    j: QuadIndex,
    m: QuadIndex,
    pump: PumpPhase,
) -> Result<f64> {
    let coupled = match pump {
        PumpPhase::Zero => j != m,
        PumpPhase::HalfPi => j == m,
    };
    if !coupled {
        // still subject to the singular-length contract
        ep_eval(p, l, |q| {
            let t = Trig::new(q, l)?;
            t.require_both()?;
            Ok(0.0)
        })
    } else {
        ep_eval(p, l, |q| correlation_raw(q, l))
    }
}

fn rism_raw(p: &PtParams, l: f64) -> Result<RismCoefficients> {
    let t = Trig::new(p, l)?;
    t.require_both()?;
    let se = t.sin_eps;
    let s = t.sin_bl;
    Ok(RismCoefficients {
        a: realize(se / t.s_act)? * t.e_loss,
        b: realize(se / t.s_pas)? * t.e_gain,
        c: realize(-s / t.s_pas)?,
        d: realize(-s / t.s_act)?,
        e: realize(se / t.s_pas)? * t.e_loss,
        f: realize(se / t.s_act)? * t.e_gain,
    })
}

/// Coefficients of the relative-intensity measurement decomposition.
pub fn rism_coefficients(p: &PtParams, l: f64) -> Result<RismCoefficients> {
    ep_eval(p, l, |q| rism_raw(q, l))
}

fn photon_stats_from(c: &RismCoefficients) -> PhotonNumberStats {
    let sq = |x: f64| x * x;
    PhotonNumberStats {
        var_ni: (sq(c.a * c.a + c.d * c.d) + sq(c.b * c.b + c.c * c.c) - 2.0) / 8.0,
        var_ns: (sq(c.f * c.f + c.d * c.d) + sq(c.e * c.e + c.c * c.c) - 2.0) / 8.0,
        covar: (sq(c.a * c.d + c.d * c.f) + sq(c.c * c.e + c.b * c.c)) / 8.0,
    }
}

/// Photon-number variances and covariance of the two output beams for the
/// vacuum input.
pub fn photon_number_stats(p: &PtParams, l: f64) -> Result<PhotonNumberStats> {
    ep_eval(p, l, |q| Ok(photon_stats_from(&rism_raw(q, l)?)))
}

/// Mean photon flux (N_i + N_s) of the vacuum-seeded output.
fn mean_flux(c: &RismCoefficients) -> f64 {
    let sq = |x: f64| x * x;
    (sq(c.a - c.b) + sq(c.e - c.f) + 2.0 * sq(c.c + c.d)) / 4.0
}

fn noise_figure_raw(p: &PtParams, l: f64) -> Result<f64> {
    let c = rism_raw(p, l)?;
    let flux = mean_flux(&c);
    if flux < 1e-12 {
        return Err(QptError::DegenerateFlux(flux));
    }
    // Shot-noise-referenced: Var[N_i - N_s] / (<N_i> + <N_s>) - 1, so that
    // negative values mark relative-intensity squeezing. The quotient is the
    // single closed expression; photon_number_stats reproduces it piecewise.
    let sq = |x: f64| x * x;
    let num = sq(c.a * c.a + c.d * c.d) + sq(c.b * c.b + c.c * c.c)
        + sq(c.f * c.f + c.d * c.d) + sq(c.e * c.e + c.c * c.c)
        - 4.0
        - 2.0 * c.d * c.d * sq(c.a + c.f)
        - 2.0 * c.c * c.c * sq(c.e + c.b);
    let den = 2.0 * (sq(c.a - c.b) + sq(c.e - c.f) + 2.0 * sq(c.c + c.d));
    Ok(num / den - 1.0)
}

/// Noise figure of the relative-intensity measurement; negative values mean
/// the difference current fluctuates below the shot noise of the two beams.
pub fn noise_figure(p: &PtParams, l: f64) -> Result<f64> {
    ep_eval(p, l, |q| noise_figure_raw(q, l))
}

/// Largest scanned b for which the relative-intensity noise stays below shot
/// noise throughout the short-length window 2*kappa*l in (0, `window`].
///
/// The squeezing stretch always sits at the start of the propagation and
/// shrinks as b grows, so "squeezed throughout a short window" is the
/// operational threshold definition; the window defaults to
/// [`NF_THRESHOLD_WINDOW`].
pub fn nf_squeezing_threshold(kappa: f64, window: f64, b_step: f64) -> Result<f64> {
    if !window.is_finite() || window <= 0.0 || !b_step.is_finite() || b_step <= 0.0 {
        return Err(QptError::NonFinite("window and b_step must be positive"));
    }
    let mut last_squeezed = 0.0;
    let mut b = b_step;
    while b < 1.0 {
        let p = PtParams::from_ratio(b, kappa)?;
        let n = 240;
        let mut all_neg = true;
        for i in 1..=n {
            let tkl = window * i as f64 / n as f64;
            let l = tkl / (2.0 * kappa);
            match noise_figure(&p, l) {
                Ok(nf) if nf < 0.0 => {}
                Ok(_) => {
                    all_neg = false;
                    break;
                }
                Err(QptError::SingularLength(_)) | Err(QptError::DegenerateFlux(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if all_neg {
            last_squeezed = b;
        } else {
            break;
        }
        b += b_step;
    }
    Ok(last_squeezed)
}

/// Default short-length window (in 2*kappa*l) for the squeezing-threshold scan.
pub const NF_THRESHOLD_WINDOW: f64 = 0.6;
