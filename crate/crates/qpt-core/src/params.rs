//! System constants of the PSA + FWM twin-beam medium and the derived
//! PT quantities.
//!
//! The whole crate works in units where the conversion rate `kappa` carries
//! the inverse length; lengths appear either as `l` (units of 1/kappa) or as
//! the dimensionless plot variable `2*kappa*l`. The eigen-propagation
//! constant `beta = kappa*sqrt(1 - b^2)` and the induced phase shift
//! `eps = atan(2*beta/g)` are kept complex so every closed form downstream
//! can be continued across the exceptional point with one rule.

use num_complex::Complex64 as C64;

use crate::error::{QptError, Result};

/// Half width of the `b` band treated as the exceptional point. Below this,
/// generic complex evaluation loses more than six digits to cancellation as
/// `beta -> 0`, so the band is evaluated by a two-sided nudge instead.
pub const EP_TOL: f64 = 1e-6;

/// Nudge used for evaluations inside the EP band: quantities are averaged
/// over b = 1 - EP_NUDGE and b = 1 + EP_NUDGE. All closed forms here are
/// analytic in b^2 through the EP, so the average is O(EP_NUDGE^2) accurate.
pub const EP_NUDGE: f64 = 1e-5;

/// Singularity guard on |sin(beta*l +/- eps)|. Variances scale as 1/sin^2,
/// so beyond this the double-precision result carries no information.
pub const SING_TOL: f64 = 1e-9;

/// A complex-continued result is accepted as real when
/// |Im| <= REAL_TOL * (1 + |Re|).
pub const REAL_TOL: f64 = 1e-9;

/// Inside the EP band the passive-pair divergence sits at kappa*l = 1; within
/// this distance of it the two nudged branches change sign and their average
/// stops meaning anything, so the band evaluation reports SingularLength.
pub const EP_LENGTH_GUARD: f64 = 1e-4;

/// Phase of the dual quadrature PT symmetry, classified from b = g/(2 kappa).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtPhase {
    /// b < 1: eigenvalues +/- beta real, all observables oscillate in l.
    Unbroken,
    /// |b - 1| <= EP_TOL: eigenvalues coalesce at zero, generator defective.
    ExceptionalPoint,
    /// b > 1: eigenvalues conjugate imaginary, oscillations cease.
    Broken,
}

/// Immutable bundle of the system constants and their derived PT quantities.
///
/// Construction computes everything once; the struct is `Copy` and safe to
/// share across threads. Identical inputs produce bitwise-identical values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    g: f64,
    kappa: f64,
    b: f64,
    beta: C64,
    epsilon: C64,
    phase: PtPhase,
}

impl PtParams {
    /// Builds the parameter set from the PSA gain rate `g` and the FWM
    /// conversion rate `kappa` (both per unit length).
    ///
    /// For b > 1 the branch `beta = +i*kappa*sqrt(b^2-1)` is fixed; every
    /// observable in the crate is even in that choice.
    pub fn new(g: f64, kappa: f64) -> Result<Self> {
        if !g.is_finite() || !kappa.is_finite() {
            return Err(QptError::NonFinite("g and kappa must be finite"));
        }
        if kappa <= 0.0 {
            return Err(QptError::NonPositiveKappa(kappa));
        }
        if g < 0.0 {
            return Err(QptError::NegativeGain(g));
        }
        let b = g / (2.0 * kappa);
        // Principal square root: positive real for b < 1, +i sqrt(b^2-1) for b > 1.
        let beta = C64::new(1.0 - b * b, 0.0).sqrt() * kappa;
        // eps = asin(beta/kappa) on the branch that keeps cos(eps) = b and
        // sin(eps) = beta/kappa; for b > 1 this is i*acosh(b). Both pieces are
        // computed through real elementary functions, which stay accurate far
        // into the broken phase where the complex asin formula cancels.
        let epsilon = if b <= 1.0 {
            C64::new((1.0 - b * b).max(0.0).sqrt().asin(), 0.0)
        } else {
            C64::new(0.0, (b + (b * b - 1.0).sqrt()).ln())
        };
        let phase = if (b - 1.0).abs() <= EP_TOL {
            PtPhase::ExceptionalPoint
        } else if b < 1.0 {
            PtPhase::Unbroken
        } else {
            PtPhase::Broken
        };
        Ok(Self { g, kappa, b, beta, epsilon, phase })
    }

    /// Convenience constructor from the dimensionless gain ratio b = g/(2 kappa).
    pub fn from_ratio(b: f64, kappa: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(QptError::NonFinite("b must be finite"));
        }
        Self::new(2.0 * kappa * b, kappa)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Dimensionless gain ratio b = g/(2 kappa).
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Eigen-propagation constant beta = kappa*sqrt(1 - b^2), complex-continued.
    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// PT-induced phase shift eps = atan(2 beta / g), complex-continued.
    pub fn epsilon(&self) -> C64 {
        self.epsilon
    }

    pub fn phase(&self) -> PtPhase {
        self.phase
    }

    /// Oscillation period of the unbroken phase in units of `2*kappa*l`:
    /// T = 2*pi*kappa/beta.
    pub fn period(&self) -> Result<f64> {
        if self.phase != PtPhase::Unbroken {
            return Err(QptError::PhaseError(self.b));
        }
        Ok(2.0 * std::f64::consts::PI * self.kappa / self.beta.re)
    }

    /// The two-sided evaluation pair for the EP band, or `None` outside it.
    ///
    /// Inside the band every operation is evaluated at b = 1 -/+ EP_NUDGE
    /// (same kappa) and averaged, which cancels the linear term of the
    /// expansion in (b - 1) and keeps roughly eight digits.
    pub fn ep_nudged(&self) -> Option<(PtParams, PtParams)> {
        if self.phase != PtPhase::ExceptionalPoint {
            return None;
        }
        let lo = PtParams::new(2.0 * self.kappa * (1.0 - EP_NUDGE), self.kappa)
            .expect("nudged params are valid by construction");
        let hi = PtParams::new(2.0 * self.kappa * (1.0 + EP_NUDGE), self.kappa)
            .expect("nudged params are valid by construction");
        Some((lo, hi))
    }

    /// Same parameters with the opposite square-root branch (beta -> -beta,
    /// eps -> -eps); observables must not depend on the choice.
    #[cfg(test)]
    pub(crate) fn with_flipped_branch(&self) -> PtParams {
        PtParams { beta: -self.beta, epsilon: -self.epsilon, ..*self }
    }

    /// Guard for EP-band evaluations of passive-denominator quantities, whose
    /// limiting singularity is at kappa*l = 1.
    pub(crate) fn ep_length_guard(&self, l: f64) -> Result<()> {
        if self.phase == PtPhase::ExceptionalPoint {
            let d = (1.0 - self.kappa * l).abs();
            if d <= EP_LENGTH_GUARD {
                return Err(QptError::SingularLength(d));
            }
        }
        Ok(())
    }
}

/// Accepts a complex-continued value as real under the crate-wide rule,
/// otherwise reports the failed continuation.
pub fn realize(z: C64) -> Result<f64> {
    if z.im.abs() <= REAL_TOL * (1.0 + z.re.abs()) {
        Ok(z.re)
    } else {
        Err(QptError::InternalConsistency { re: z.re, im: z.im })
    }
}

/// Complex trigonometric bundle shared by every closed form at one (params, l).
///
/// `s_act = sin(beta*l + eps)` is the active-pair denominator and
/// `s_pas = sin(eps - beta*l)` the passive-pair one; their zeros are the
/// backward-amplification singularities of the boundary-value problem.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Trig {
    pub sin_eps: C64,
    pub cos_eps: C64,
    pub sin_bl: C64,
    pub cos_bl: C64,
    pub s_act: C64,
    pub s_pas: C64,
    pub e_gain: f64,
    pub e_loss: f64,
    pub gl: f64,
    pub kl: f64,
}

impl Trig {
    pub fn new(p: &PtParams, l: f64) -> Result<Self> {
        if !l.is_finite() || l < 0.0 {
            return Err(QptError::NonFinite("l must be finite and nonnegative"));
        }
        let bl = p.beta * l;
        let gl = p.g * l;
        Ok(Self {
            sin_eps: p.epsilon.sin(),
            cos_eps: p.epsilon.cos(),
            sin_bl: bl.sin(),
            cos_bl: bl.cos(),
            s_act: (bl + p.epsilon).sin(),
            s_pas: (p.epsilon - bl).sin(),
            e_gain: (0.5 * gl).exp(),
            e_loss: (-0.5 * gl).exp(),
            gl,
            kl: p.kappa * l,
        })
    }

    pub fn require_active(&self) -> Result<()> {
        let m = self.s_act.norm();
        if m <= SING_TOL {
            Err(QptError::SingularLength(m))
        } else {
            Ok(())
        }
    }

    pub fn require_passive(&self) -> Result<()> {
        let m = self.s_pas.norm();
        if m <= SING_TOL {
            Err(QptError::SingularLength(m))
        } else {
            Ok(())
        }
    }

    pub fn require_both(&self) -> Result<()> {
        self.require_active()?;
        self.require_passive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn tmsv_limit() {
        let p = PtParams::new(0.0, 0.5).unwrap();
        assert_eq!(p.b(), 0.0);
        assert_eq!(p.beta(), C64::new(0.5, 0.0));
        assert!((p.epsilon().re - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(p.epsilon().im, 0.0);
        assert_eq!(p.phase(), PtPhase::Unbroken);
    }

    #[test]
    fn exceptional_point() {
        let p = PtParams::new(1.0, 0.5).unwrap();
        assert_eq!(p.b(), 1.0);
        assert_eq!(p.beta().norm(), 0.0);
        assert_eq!(p.phase(), PtPhase::ExceptionalPoint);
    }

    #[test]
    fn broken_phase_branch() {
        let p = PtParams::new(2.0, 0.5).unwrap();
        assert_eq!(p.b(), 2.0);
        // beta = i*kappa*sqrt(3) with the positive imaginary branch
        assert!(p.beta().re.abs() < 1e-15);
        assert!((p.beta().im - 0.8660254037844386).abs() < 1e-15);
        assert_eq!(p.phase(), PtPhase::Broken);
    }

    #[test]
    fn epsilon_identities_across_phases() {
        for &b in &[0.0, 0.3, 0.7, 0.999, 1.001, 1.5, 2.0] {
            let p = PtParams::from_ratio(b, 0.5).unwrap();
            let ce = p.epsilon().cos();
            let se = p.epsilon().sin();
            assert!((ce - C64::new(b, 0.0)).norm() <= 1e-12 * (1.0 + b), "cos eps != b at b={b}");
            assert!((se - p.beta() / p.kappa()).norm() <= 1e-12, "sin eps != beta/kappa at b={b}");
            let lhs = p.beta() * p.beta() + C64::new(p.g() * p.g() / 4.0, 0.0);
            let kk = p.kappa() * p.kappa();
            assert!((lhs - C64::new(kk, 0.0)).norm() <= 1e-12 * kk);
        }
    }

    #[test]
    fn construction_is_pure() {
        let a = PtParams::new(0.7, 0.31).unwrap();
        let b = PtParams::new(0.7, 0.31).unwrap();
        assert_eq!(a.beta().re.to_bits(), b.beta().re.to_bits());
        assert_eq!(a.beta().im.to_bits(), b.beta().im.to_bits());
        assert_eq!(a.epsilon().re.to_bits(), b.epsilon().re.to_bits());
        assert_eq!(a.epsilon().im.to_bits(), b.epsilon().im.to_bits());
    }

    #[test]
    fn period_values_and_errors() {
        let p0 = PtParams::new(0.0, 0.5).unwrap();
        assert!((p0.period().unwrap() - 2.0 * PI).abs() < 1e-14);
        let p = PtParams::from_ratio(0.5, 0.5).unwrap();
        assert!((p.period().unwrap() - 7.255197456936871).abs() < 1e-12);
        let ep = PtParams::new(1.0, 0.5).unwrap();
        assert!(matches!(ep.period(), Err(QptError::PhaseError(_))));
        let broken = PtParams::new(2.0, 0.5).unwrap();
        assert!(matches!(broken.period(), Err(QptError::PhaseError(_))));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(PtParams::new(1.0, 0.0), Err(QptError::NonPositiveKappa(_))));
        assert!(matches!(PtParams::new(1.0, -2.0), Err(QptError::NonPositiveKappa(_))));
        assert!(matches!(PtParams::new(f64::NAN, 0.5), Err(QptError::NonFinite(_))));
        assert!(matches!(PtParams::new(1.0, f64::INFINITY), Err(QptError::NonFinite(_))));
        assert!(matches!(PtParams::new(-0.1, 0.5), Err(QptError::NegativeGain(_))));
    }

    #[test]
    fn realize_rule() {
        assert_eq!(realize(C64::new(2.0, 1e-10)).unwrap(), 2.0);
        assert!(realize(C64::new(1.0, 1e-3)).is_err());
    }
}
