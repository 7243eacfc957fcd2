//! Closed-form boundary-value transfer matrices for the conjugate quadrature
//! pairs, the effective non-Hermitian generator matrices, and the commutator
//! preservation check.
//!
//! Boundary orientation: the idler enters at z = l (backward mode) and the
//! signal at z = 0, so each 2x2 map sends the physical inputs to the physical
//! outputs:
//!
//! - `QiPs`: (q_i(0), p_s(l)) <- (q_i(l), p_s(0))
//! - `PiQs`: (q_s(l), p_i(0)) <- (q_s(0), p_i(l))
//! - `QiQs`: (q_i(0), q_s(l)) <- (q_i(l), q_s(0))   (pump phase pi/2)
//! - `PiPs`: (p_i(0), p_s(l)) <- (p_i(l), p_s(0))   (pump phase pi/2)

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::params::{realize, PtParams, Trig};

/// Overall pump phase of the FWM drive, selecting which quadrature pairs
/// couple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpPhase {
    /// phi = 0: {q_i, p_s} active, {p_i, q_s} passive.
    Zero,
    /// phi = pi/2: {q_i, q_s} active, {p_i, p_s} passive.
    HalfPi,
}

/// One conjugate quadrature pair evolving under its own PT-symmetric
/// generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadPair {
    /// {q_i, p_s}, active PT (net gain +g/2), pump phase 0.
    QiPs,
    /// {p_i, q_s}, passive PT (net loss -g/2), pump phase 0.
    PiQs,
    /// {q_i, q_s}, active PT, pump phase pi/2.
    QiQs,
    /// {p_i, p_s}, passive PT, pump phase pi/2.
    PiPs,
}

impl QuadPair {
    pub const ALL: [QuadPair; 4] = [QuadPair::QiPs, QuadPair::PiQs, QuadPair::QiQs, QuadPair::PiPs];

    /// Active pairs carry the net gain; passive pairs the net loss.
    pub fn is_active(self) -> bool {
        matches!(self, QuadPair::QiPs | QuadPair::QiQs)
    }

    pub fn pump_phase(self) -> PumpPhase {
        match self {
            QuadPair::QiPs | QuadPair::PiQs => PumpPhase::Zero,
            QuadPair::QiQs | QuadPair::PiPs => PumpPhase::HalfPi,
        }
    }
}

/// Real 2x2 boundary-value map for one quadrature pair at one length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
    pub pair: QuadPair,
    pub l: f64,
}

impl TransferMatrix2 {
    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Applies the map to an input pair (backward-port value, forward-port value).
    pub fn apply(&self, x: [f64; 2]) -> [f64; 2] {
        [self.m11 * x[0] + self.m12 * x[1], self.m21 * x[0] + self.m22 * x[1]]
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }
}

/// Generator of the forward z-evolution d/dz v = G v for the chosen pair.
pub fn forward_generator(params: &PtParams, pair: QuadPair) -> [[f64; 2]; 2] {
    let (g, k) = (params.g(), params.kappa());
    match pair {
        QuadPair::QiPs => [[g, k], [-k, 0.0]],
        QuadPair::PiQs => [[-g, k], [-k, 0.0]],
        QuadPair::QiQs => [[g, k], [-k, 0.0]],
        QuadPair::PiPs => [[-g, -k], [k, 0.0]],
    }
}

/// Traceless part of the effective non-Hermitian Hamiltonian i*G, i.e. the
/// matrix left after removing the +/- i(g/2) identity shift. This is the part
/// that commutes with PT (P the swap matrix, T complex conjugation).
pub fn effective_hamiltonian(params: &PtParams, pair: QuadPair) -> [[C64; 2]; 2] {
    let gm = forward_generator(params, pair);
    let i = C64::new(0.0, 1.0);
    let h = [
        [i * gm[0][0], i * gm[0][1]],
        [i * gm[1][0], i * gm[1][1]],
    ];
    let half_trace = (h[0][0] + h[1][1]) / 2.0;
    [
        [h[0][0] - half_trace, h[0][1]],
        [h[1][0], h[1][1] - half_trace],
    ]
}

fn transfer_raw(params: &PtParams, l: f64, pair: QuadPair) -> Result<TransferMatrix2> {
    let t = Trig::new(params, l)?;
    let den = if pair.is_active() {
        t.require_active()?;
        t.s_act
    } else {
        t.require_passive()?;
        t.s_pas
    };
    let se_den = realize(t.sin_eps / den)?;
    let s_den = realize(t.sin_bl / den)?;
    let (m11, m22, off) = match pair {
        // rows (q_i(0), p_s(l)), (q_s(l), p_i(0)), (q_i(0), q_s(l)):
        // de-amplified output first
        QuadPair::QiPs | QuadPair::PiQs | QuadPair::QiQs => {
            (t.e_loss * se_den, t.e_gain * se_den, -s_den)
        }
        // rows (p_i(0), p_s(l)): amplified output first
        QuadPair::PiPs => (t.e_gain * se_den, t.e_loss * se_den, s_den),
    };
    Ok(TransferMatrix2 { m11, m12: off, m21: off, m22, pair, l })
}

/// Closed-form boundary-value transfer matrix.
///
/// Evaluated through the complex continuation and realized entrywise; inside
/// the EP band the result is the two-sided nudge average.
pub fn transfer(params: &PtParams, l: f64, pair: QuadPair) -> Result<TransferMatrix2> {
    if let Some((lo, hi)) = params.ep_nudged() {
        if !pair.is_active() {
            params.ep_length_guard(l)?;
        }
        let a = transfer_raw(&lo, l, pair)?;
        let b = transfer_raw(&hi, l, pair)?;
        return Ok(TransferMatrix2 {
            m11: 0.5 * (a.m11 + b.m11),
            m12: 0.5 * (a.m12 + b.m12),
            m21: 0.5 * (a.m21 + b.m21),
            m22: 0.5 * (a.m22 + b.m22),
            pair,
            l,
        });
    }
    transfer_raw(params, l, pair)
}

fn commutator_residual_raw(params: &PtParams, l: f64) -> Result<f64> {
    let t = Trig::new(params, l)?;
    t.require_both()?;
    let se2 = t.sin_eps * t.sin_eps;
    let s2 = t.sin_bl * t.sin_bl;
    // phi = 0: [q_i(0), p_i(0)] and [q_s(l), p_s(l)] both reduce to
    // (sin^2 eps - sin^2 beta*l) / (sin(eps+beta*l) sin(eps-beta*l)) = 1.
    let den0 = t.s_act * t.s_pas;
    let w_qi = realize((se2 - s2) / den0)?;
    let w_qs = realize((-s2 + se2) / den0)?;
    // phi = pi/2: the same identities with the opposite sign pattern,
    // (sin^2 beta*l - sin^2 eps) / (sin(beta*l+eps) sin(beta*l-eps)) = 1.
    let den90 = t.s_act * (-t.s_pas);
    let w_qi90 = realize((-se2 + s2) / den90)?;
    let w_qs90 = realize((s2 - se2) / den90)?;
    Ok([w_qi, w_qs, w_qi90, w_qs90]
        .iter()
        .map(|w| (w - 1.0).abs())
        .fold(0.0, f64::max))
}

/// Residual of the commutator-preservation identities for both pump phases:
/// the weighted sine sums that must reproduce [q, p] = i/2 are evaluated and
/// the worst |sum - 1| returned.
pub fn check_commutators(params: &PtParams, l: f64) -> Result<f64> {
    if let Some((lo, hi)) = params.ep_nudged() {
        params.ep_length_guard(l)?;
        let a = commutator_residual_raw(&lo, l)?;
        let b = commutator_residual_raw(&hi, l)?;
        return Ok(0.5 * (a + b));
    }
    commutator_residual_raw(params, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::QptError;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn generators_match_coupled_quadrature_forms() {
        let p = PtParams::new(0.0, 0.5).unwrap();
        assert_eq!(forward_generator(&p, QuadPair::QiPs), [[0.0, 0.5], [-0.5, 0.0]]);
        let p = PtParams::new(1.0, 0.5).unwrap();
        assert_eq!(forward_generator(&p, QuadPair::PiQs), [[-1.0, 0.5], [-0.5, 0.0]]);
        assert_eq!(forward_generator(&p, QuadPair::PiPs), [[-1.0, -0.5], [0.5, 0.0]]);
    }

    #[test]
    fn hamiltonian_matrix_values() {
        // traceless active generator: [[i g/2, i k], [-i k, -i g/2]]
        let p = PtParams::new(1.0, 0.5).unwrap();
        let h = effective_hamiltonian(&p, QuadPair::QiPs);
        let i = C64::new(0.0, 1.0);
        assert!((h[0][0] - i * 0.5).norm() < 1e-15);
        assert!((h[0][1] - i * 0.5).norm() < 1e-15);
        assert!((h[1][0] + i * 0.5).norm() < 1e-15);
        assert!((h[1][1] + i * 0.5).norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_complementarity_and_pt_commutation() {
        let p = PtParams::new(0.8, 0.37).unwrap();
        let ha = effective_hamiltonian(&p, QuadPair::QiPs);
        let hp = effective_hamiltonian(&p, QuadPair::PiQs);
        // H_a + H_p^T = 0
        for r in 0..2 {
            for c in 0..2 {
                assert!((ha[r][c] + hp[c][r]).norm() < 1e-15);
            }
        }
        // phi = pi/2: H'_a + H'_p = 0
        let ha2 = effective_hamiltonian(&p, QuadPair::QiQs);
        let hp2 = effective_hamiltonian(&p, QuadPair::PiPs);
        for r in 0..2 {
            for c in 0..2 {
                assert!((ha2[r][c] + hp2[r][c]).norm() < 1e-15);
            }
        }
        // [H, PT] = 0 <=> H P = P conj(H) for the swap matrix P
        for pair in QuadPair::ALL {
            let h = effective_hamiltonian(&p, pair);
            let hp_mat = [[h[0][1], h[0][0]], [h[1][1], h[1][0]]]; // H * P
            let ph = [[h[1][0].conj(), h[1][1].conj()], [h[0][0].conj(), h[0][1].conj()]]; // P * conj(H)
            for r in 0..2 {
                for c in 0..2 {
                    assert!((hp_mat[r][c] - ph[r][c]).norm() < 1e-15, "{pair:?}");
                }
            }
        }
    }

    #[test]
    fn identity_at_zero_length() {
        for &b in &[0.0, 0.4, 1.3] {
            let p = PtParams::from_ratio(b, 0.5).unwrap();
            for pair in QuadPair::ALL {
                let m = transfer(&p, 0.0, pair).unwrap();
                assert!(close(m.m11, 1.0, 1e-12) && close(m.m22, 1.0, 1e-12));
                assert!(m.m12 == 0.0 && m.m21 == 0.0);
            }
        }
    }

    #[test]
    fn rotation_case_matches_hand_value() {
        // b = 0, kappa*l = pi/4: the boundary-rearranged rotation
        let p = PtParams::new(0.0, 0.5).unwrap();
        let l = FRAC_PI_2; // kappa*l = pi/4
        let m = transfer(&p, l, QuadPair::QiPs).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        assert!(close(m.m11, r2, 1e-12) && close(m.m22, r2, 1e-12));
        assert!(close(m.m12, -1.0, 1e-12) && close(m.m21, -1.0, 1e-12));
    }

    #[test]
    fn frozen_boundary_maps() {
        // Values frozen from the matrix-exponential oracle.
        let p = PtParams::from_ratio(0.5, 0.5).unwrap();
        let l = 3.0; // 2*kappa*l = 3
        let m = transfer(&p, l, QuadPair::QiPs).unwrap();
        assert!(close(m.m11, 0.5728520758771634, 1e-12));
        assert!(close(m.m12, -1.348945727492501, 1e-12));
        assert!(close(m.m22, 2.567344887379155, 1e-12));
        let m = transfer(&p, l, QuadPair::PiQs).unwrap();
        assert!(close(m.m11, -1.641665252627213, 1e-12));
        assert!(close(m.m12, 3.865775165627984, 1e-12));
        assert!(close(m.m22, -7.357433219853159, 1e-12));
        // broken phase, b = 2, 2*kappa*l = 5
        let p = PtParams::from_ratio(2.0, 0.5).unwrap();
        let m = transfer(&p, 5.0, QuadPair::QiPs).unwrap();
        assert!(close(m.m11, 8.23428322168382e-5, 1e-14));
        assert!(close(m.m12, -0.2679060802105663, 1e-12));
        assert!(close(m.m22, 1.8137215772716953, 1e-12));
    }

    #[test]
    fn determinant_identity_pairs_to_one() {
        for &b in &[0.0, 0.3, 0.8, 1.4, 2.0] {
            let p = PtParams::from_ratio(b, 0.5).unwrap();
            for &l in &[0.7, 2.3, 4.9] {
                let da = transfer(&p, l, QuadPair::QiPs).unwrap().det();
                let dp = transfer(&p, l, QuadPair::PiQs).unwrap().det();
                assert!((da * dp - 1.0).abs() < 1e-10, "b={b} l={l}");
                let da2 = transfer(&p, l, QuadPair::QiQs).unwrap().det();
                let dp2 = transfer(&p, l, QuadPair::PiPs).unwrap().det();
                assert!((da2 * dp2 - 1.0).abs() < 1e-10, "b={b} l={l} (pi/2)");
                // det of the active map is the complex sine ratio
                let bl = p.beta() * l;
                let want = ((p.epsilon() - bl).sin() / (p.epsilon() + bl).sin()).re;
                assert!((da - want).abs() < 1e-10 * (1.0 + want.abs()), "b={b} l={l} det ratio");
            }
        }
    }

    #[test]
    fn singular_length_raised_at_ep() {
        // At the EP the passive denominator vanishes at kappa*l = 1.
        let p = PtParams::new(1.0, 0.5).unwrap();
        let err = transfer(&p, 2.0, QuadPair::PiQs).unwrap_err();
        assert!(matches!(err, QptError::SingularLength(_)));
    }

    #[test]
    fn singular_length_boundary_behavior() {
        // Just above the guard the variance-scale entries blow up past 1/SING_TOL;
        // at or below the guard the error is raised.
        let p = PtParams::from_ratio(0.4, 0.5).unwrap();
        let beta = p.beta().re;
        let eps = p.epsilon().re;
        let l_sing = (std::f64::consts::PI - eps) / beta;
        let delta = 2e-9 / beta;
        let m = transfer(&p, l_sing - delta, QuadPair::QiPs).unwrap();
        assert!(m.m22.abs() > 1e8, "entry should diverge near the singularity");
        assert!(transfer(&p, l_sing, QuadPair::QiPs).is_err());
    }

    #[test]
    fn commutator_residuals() {
        let p = PtParams::from_ratio(0.5, 0.5).unwrap();
        assert_eq!(check_commutators(&p, 0.0).unwrap(), 0.0);
        assert!(check_commutators(&p, 3.0).unwrap() < 1e-10);
        let p = PtParams::from_ratio(2.0, 0.5).unwrap();
        assert!(check_commutators(&p, 5.0).unwrap() < 1e-10);
    }
}
