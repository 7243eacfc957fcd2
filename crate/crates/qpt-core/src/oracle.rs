//! Independent brute-force validators for the closed forms: matrix-exponential
//! boundary maps, covariance propagation, Isserlis photon statistics, and a
//! generic Richardson finite difference.
//!
//! Nothing in this module uses a closed form from `observables`, `epr` or
//! `sensing`; the dependency direction is one-way so these stay usable as
//! oracles. Generators are rebuilt here from (g, kappa) directly, and the
//! matrix exponential works in plain real arithmetic for every phase (no
//! complex continuation anywhere).

use num_complex::Complex64 as C64;

use crate::error::{QptError, Result};
use crate::params::PtParams;

type Mat2 = [[f64; 2]; 2];
type Mat4 = [[f64; 4]; 4];

/// How a boundary map was derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    /// Closed 2x2 exponential (eigenvalue split with a series fallback).
    MatrixExponential,
    /// Fixed-step RK4 integration of the matrix ODE M' = G M.
    OdeIntegration,
}

/// Rearranged boundary-value map together with its derivation tag.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryMap {
    pub m: Mat2,
    pub derivation: Derivation,
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn mat2_add_scaled(a: &Mat2, b: &Mat2, s: f64) -> Mat2 {
    [
        [a[0][0] + s * b[0][0], a[0][1] + s * b[0][1]],
        [a[1][0] + s * b[1][0], a[1][1] + s * b[1][1]],
    ]
}

/// cosh(sqrt(x)) and sinh(sqrt(x))/sqrt(x), entire in x, evaluated through a
/// short series when |x| is small enough for the direct form to lose digits.
fn cosh_sinhc(x: C64) -> (C64, C64) {
    if x.norm() < 1e-8 {
        let c = C64::new(1.0, 0.0) + x / 2.0 + x * x / 24.0 + x * x * x / 720.0;
        let s = C64::new(1.0, 0.0) + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0;
        (c, s)
    } else {
        let mu = x.sqrt();
        (mu.cosh(), mu.sinh() / mu)
    }
}

/// Closed-form exponential of a real 2x2 matrix times `l`.
///
/// Splits G = (tr/2) I + N with N traceless so N^2 = mu^2 I, then
/// exp(G l) = e^{tr l/2} [cosh(mu l) I + sinh(mu l)/mu * N]. The series branch
/// of `cosh_sinhc` covers the defective case mu -> 0 (the exceptional point).
pub fn expm2(g: &Mat2, l: f64) -> Mat2 {
    let half_tr = 0.5 * (g[0][0] + g[1][1]);
    let n = [[g[0][0] - half_tr, g[0][1]], [g[1][0], g[1][1] - half_tr]];
    // N^2 = (n00^2 + n01*n10) I for traceless N
    let mu2 = C64::new((n[0][0] * n[0][0] + n[0][1] * n[1][0]) * l * l, 0.0);
    let (ch, shc) = cosh_sinhc(mu2);
    let scale = (half_tr * l).exp();
    let (ch, shc) = (ch.re, shc.re * l);
    [
        [scale * (ch + shc * n[0][0]), scale * shc * n[0][1]],
        [scale * shc * n[1][0], scale * (ch + shc * n[1][1])],
    ]
}

/// Scaling-and-squaring exponential with a diagonal Pade(13) kernel, the
/// independent route the module self-test compares against `expm2`.
pub fn expm2_pade(g: &Mat2, l: f64) -> Mat2 {
    let a0 = [
        [g[0][0] * l, g[0][1] * l],
        [g[1][0] * l, g[1][1] * l],
    ];
    let norm = a0
        .iter()
        .map(|r| r[0].abs() + r[1].abs())
        .fold(0.0, f64::max);
    // theta_13 for the diagonal Pade(13) approximant
    let theta = 5.371920351148152;
    let squarings = if norm > theta {
        (norm / theta).log2().ceil() as u32
    } else {
        0
    };
    let s = 0.5f64.powi(squarings as i32);
    let a = [
        [a0[0][0] * s, a0[0][1] * s],
        [a0[1][0] * s, a0[1][1] * s],
    ];

    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let id: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let a2 = mat2_mul(&a, &a);
    let a4 = mat2_mul(&a2, &a2);
    let a6 = mat2_mul(&a2, &a4);
    // U = A (b13 A6 + b11 A4 + b9 A2) A6 + A (b7 A6 + b5 A4 + b3 A2 + b1 I)
    let mut w1 = [[0.0; 2]; 2];
    let mut w2 = [[0.0; 2]; 2];
    let mut z1 = [[0.0; 2]; 2];
    let mut z2 = [[0.0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            w1[r][c] = B[13] * a6[r][c] + B[11] * a4[r][c] + B[9] * a2[r][c];
            w2[r][c] = B[7] * a6[r][c] + B[5] * a4[r][c] + B[3] * a2[r][c] + B[1] * id[r][c];
            z1[r][c] = B[12] * a6[r][c] + B[10] * a4[r][c] + B[8] * a2[r][c];
            z2[r][c] = B[6] * a6[r][c] + B[4] * a4[r][c] + B[2] * a2[r][c] + B[0] * id[r][c];
        }
    }
    let u = mat2_mul(&a, &mat2_add_scaled(&mat2_mul(&w1, &a6), &w2, 1.0));
    let v = mat2_add_scaled(&mat2_mul(&z1, &a6), &z2, 1.0);
    // solve (V - U) X = (V + U)
    let p = mat2_add_scaled(&v, &u, 1.0);
    let q = mat2_add_scaled(&v, &u, -1.0);
    let det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    let qinv = [
        [q[1][1] / det, -q[0][1] / det],
        [-q[1][0] / det, q[0][0] / det],
    ];
    let mut x = mat2_mul(&qinv, &p);
    for _ in 0..squarings {
        x = mat2_mul(&x, &x);
    }
    x
}

/// Forward propagator by fixed-step RK4 on M' = G M over [0, l].
pub fn rk4_propagator(g: &Mat2, l: f64, steps: usize) -> Mat2 {
    let mut m: Mat2 = [[1.0, 0.0], [0.0, 1.0]];
    let h = l / steps as f64;
    for _ in 0..steps {
        let k1 = mat2_mul(g, &m);
        let k2 = mat2_mul(g, &mat2_add_scaled(&m, &k1, h / 2.0));
        let k3 = mat2_mul(g, &mat2_add_scaled(&m, &k2, h / 2.0));
        let k4 = mat2_mul(g, &mat2_add_scaled(&m, &k3, h));
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] += h / 6.0 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]);
            }
        }
    }
    m
}

fn rearrange(m_fwd: &Mat2, det_fwd: f64) -> Result<Mat2> {
    // Inputs are (x1(l), x2(0)) and outputs (x1(0), x2(l)); solving the
    // forward relation for those components pivots on M11.
    let pivot = m_fwd[0][0];
    if pivot.abs() <= 1e-12 {
        return Err(QptError::SingularRearrangement(pivot.abs()));
    }
    Ok([
        [1.0 / pivot, -m_fwd[0][1] / pivot],
        [m_fwd[1][0] / pivot, det_fwd / pivot],
    ])
}

/// Boundary-value map from a forward generator: exponentiates, then solves the
/// 2x2 linear system so the physical inputs (x1 at l, x2 at 0) map to the
/// outputs (x1 at 0, x2 at l).
pub fn oracle_boundary_map(generator: &Mat2, l: f64) -> Result<BoundaryMap> {
    oracle_boundary_map_with(generator, l, Derivation::MatrixExponential)
}

/// Same rearrangement with an explicit derivation route.
pub fn oracle_boundary_map_with(generator: &Mat2, l: f64, derivation: Derivation) -> Result<BoundaryMap> {
    if !l.is_finite() || l < 0.0 {
        return Err(QptError::NonFinite("l must be finite and nonnegative"));
    }
    let m_fwd = match derivation {
        Derivation::MatrixExponential => expm2(generator, l),
        Derivation::OdeIntegration => rk4_propagator(generator, l, 10_000),
    };
    // det exp(G l) = exp(l tr G); using the identity instead of the entry
    // product keeps the amplified-output column from cancelling away.
    let det_fwd = ((generator[0][0] + generator[1][1]) * l).exp();
    Ok(BoundaryMap { m: rearrange(&m_fwd, det_fwd)?, derivation })
}

/// The two forward generators of the pump-phase-0 pairs, rebuilt from (g, kappa).
fn generators(p: &PtParams) -> (Mat2, Mat2) {
    let (g, k) = (p.g(), p.kappa());
    // {q_i, p_s} and {p_i, q_s}
    ([[g, k], [-k, 0.0]], [[-g, k], [-k, 0.0]])
}

/// Output covariance and mean over (q_i(0), p_i(0), q_s(l), p_s(l)) by
/// propagating the vacuum covariance (1/4) I and the input means through the
/// rearranged boundary maps. Cross-pair entries are exactly zero because the
/// two pairs consume disjoint input ports.
pub fn oracle_output_covariance(p: &PtParams, l: f64) -> Result<(Mat4, [f64; 4])> {
    oracle_output_covariance_seeded(p, l, 0.0)
}

/// Covariance/mean propagation with every input port seeded at mean `alpha`.
pub fn oracle_output_covariance_seeded(p: &PtParams, l: f64, alpha: f64) -> Result<(Mat4, [f64; 4])> {
    let (ga, gp) = generators(p);
    // active map rows: (q_i(0), p_s(l)); passive map rows: (p_i(0), q_s(l))
    let ra = oracle_boundary_map(&ga, l)?.m;
    let rp = oracle_boundary_map(&gp, l)?.m;
    let quarter = 0.25;
    let cov_pair = |r: &Mat2| -> Mat2 {
        [
            [quarter * (r[0][0] * r[0][0] + r[0][1] * r[0][1]), quarter * (r[0][0] * r[1][0] + r[0][1] * r[1][1])],
            [quarter * (r[1][0] * r[0][0] + r[1][1] * r[0][1]), quarter * (r[1][0] * r[1][0] + r[1][1] * r[1][1])],
        ]
    };
    let ca = cov_pair(&ra);
    let cp = cov_pair(&rp);
    let mut cov = [[0.0; 4]; 4];
    // basis (q_i(0), p_i(0), q_s(l), p_s(l))
    cov[0][0] = ca[0][0];
    cov[3][3] = ca[1][1];
    cov[0][3] = ca[0][1];
    cov[3][0] = ca[1][0];
    cov[1][1] = cp[0][0];
    cov[2][2] = cp[1][1];
    cov[1][2] = cp[0][1];
    cov[2][1] = cp[1][0];
    let ma = [ra[0][0] * alpha + ra[0][1] * alpha, ra[1][0] * alpha + ra[1][1] * alpha];
    let mp = [rp[0][0] * alpha + rp[0][1] * alpha, rp[1][0] * alpha + rp[1][1] * alpha];
    Ok((cov, [ma[0], mp[0], mp[1], ma[1]]))
}

/// LDL^T pivots of a symmetric 4x4; used for the PSD guard.
fn ldlt_pivots(a: &Mat4) -> Result<[f64; 4]> {
    let mut m = *a;
    let mut d = [0.0; 4];
    for k in 0..4 {
        d[k] = m[k][k];
        if d[k] < -1e-12 {
            return Err(QptError::NotGaussianValid(d[k]));
        }
        if d[k].abs() <= 1e-14 {
            continue; // semidefinite direction; nothing to eliminate
        }
        for i in (k + 1)..4 {
            let f = m[i][k] / d[k];
            for j in k..4 {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    Ok(d)
}

/// Photon-number statistics (Var N_i, Var N_s, photon-number covariance) from
/// the quadrature second moments by the Isserlis/Wick expansion, with the
/// canonical [q, p] = i/2 ordering corrections folded in.
///
/// Basis of `cov4`/`mean4` is (q_i(0), p_i(0), q_s(l), p_s(l)).
pub fn oracle_photon_moments(cov4: &Mat4, mean4: &[f64; 4]) -> Result<(f64, f64, f64)> {
    for r in 0..4 {
        for c in (r + 1)..4 {
            if (cov4[r][c] - cov4[c][r]).abs() > 1e-12 * (1.0 + cov4[r][c].abs()) {
                return Err(QptError::NotGaussianValid(cov4[r][c] - cov4[c][r]));
            }
        }
    }
    ldlt_pivots(cov4)?;
    let (vx, vy, vu, vv) = (cov4[0][0], cov4[1][1], cov4[2][2], cov4[3][3]);
    let cxy = cov4[0][1];
    let cuv = cov4[2][3];
    let (mx, my, mu, mv) = (mean4[0], mean4[1], mean4[2], mean4[3]);
    // N = q^2 + p^2 - 1/2; the -1/4 comes from the ordering terms (i/4)^2.
    let var_ni = 2.0 * vx * vx + 2.0 * vy * vy + 4.0 * cxy * cxy - 0.25
        + 4.0 * (mx * mx * vx + my * my * vy + 2.0 * mx * my * cxy);
    let var_ns = 2.0 * vu * vu + 2.0 * vv * vv + 4.0 * cuv * cuv - 0.25
        + 4.0 * (mu * mu * vu + mv * mv * vv + 2.0 * mu * mv * cuv);
    let cross = [
        (cov4[0][2], mx, mu),
        (cov4[0][3], mx, mv),
        (cov4[1][2], my, mu),
        (cov4[1][3], my, mv),
    ];
    let covar = cross
        .iter()
        .map(|(c, m1, m2)| 2.0 * c * c + 4.0 * m1 * m2 * c)
        .sum();
    Ok((var_ni, var_ns, covar))
}

/// Richardson-extrapolated central difference: (4 D(h/2) - D(h)) / 3 with
/// D(h) = (f(x+h) - f(x-h)) / 2h. Errors from `f` propagate.
pub fn finite_difference<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let d = |f: &mut F, hh: f64| -> Result<f64> { Ok((f(x + hh)? - f(x - hh)?) / (2.0 * hh)) };
    let dh = d(&mut f, h)?;
    let dh2 = d(&mut f, 0.5 * h)?;
    Ok((4.0 * dh2 - dh) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_methods_agree() {
        let cases = [
            [[0.0, 0.5], [-0.5, 0.0]],
            [[1.0, 0.5], [-0.5, 0.0]],
            [[2.0, 0.5], [-0.5, 0.0]], // defective at l scaling (EP generator)
            [[-0.8, -0.37], [0.37, 0.0]],
        ];
        for g in &cases {
            for &l in &[0.0, 0.3, 2.0, 7.0] {
                let a = expm2(g, l);
                let b = expm2_pade(g, l);
                let scale = a.iter().flatten().map(|x| x.abs()).fold(1.0, f64::max);
                for r in 0..2 {
                    for c in 0..2 {
                        assert!(
                            (a[r][c] - b[r][c]).abs() <= 1e-12 * scale,
                            "exp mismatch at l={l}: {:?} vs {:?}",
                            a,
                            b
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn derivations_agree() {
        let g = [[0.7, 0.5], [-0.5, 0.0]];
        let a = oracle_boundary_map_with(&g, 2.0, Derivation::MatrixExponential).unwrap();
        let b = oracle_boundary_map_with(&g, 2.0, Derivation::OdeIntegration).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((a.m[r][c] - b.m[r][c]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_generator_gives_identity() {
        let g = [[0.0, 0.0], [0.0, 0.0]];
        let m = oracle_boundary_map(&g, 3.0).unwrap().m;
        assert_eq!(m, [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn rotation_rearrangement() {
        // G = [[0, k], [-k, 0]], kappa*l = pi/4: rearranged map [[sqrt2, -1], [-1, sqrt2]]
        let g = [[0.0, 0.5], [-0.5, 0.0]];
        let m = oracle_boundary_map(&g, std::f64::consts::FRAC_PI_2).unwrap().m;
        let r2 = std::f64::consts::SQRT_2;
        assert!((m[0][0] - r2).abs() < 1e-12);
        assert!((m[0][1] + 1.0).abs() < 1e-12);
        assert!((m[1][0] + 1.0).abs() < 1e-12);
        assert!((m[1][1] - r2).abs() < 1e-12);
    }

    #[test]
    fn singular_pivot_reported() {
        // rotation by pi/2 makes M11 = cos(pi/2) = 0
        let g = [[0.0, 1.0], [-1.0, 0.0]];
        let err = oracle_boundary_map(&g, std::f64::consts::FRAC_PI_2).unwrap_err();
        assert!(matches!(err, QptError::SingularRearrangement(_)));
    }

    #[test]
    fn vacuum_covariance_at_zero_length() {
        let p = PtParams::from_ratio(0.6, 0.5).unwrap();
        let (cov, mean) = oracle_output_covariance(&p, 0.0).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let want = if r == c { 0.25 } else { 0.0 };
                assert!((cov[r][c] - want).abs() < 1e-14);
            }
        }
        assert_eq!(mean, [0.0; 4]);
    }

    #[test]
    fn photon_moments_vacuum_and_coherent() {
        let mut vac = [[0.0; 4]; 4];
        for i in 0..4 {
            vac[i][i] = 0.25;
        }
        let (ni, ns, c) = oracle_photon_moments(&vac, &[0.0; 4]).unwrap();
        assert!(ni.abs() < 1e-15 && ns.abs() < 1e-15 && c.abs() < 1e-15);
        // displaced vacuum: Poissonian Var N = |alpha|^2 = m_q^2 + m_p^2
        let (ni, _, c) = oracle_photon_moments(&vac, &[0.3, -0.4, 0.0, 0.0]).unwrap();
        assert!((ni - 0.25).abs() < 1e-14);
        assert!(c.abs() < 1e-15);
    }

    #[test]
    fn psd_guard() {
        let mut bad = [[0.0; 4]; 4];
        bad[0][0] = -1.0;
        bad[1][1] = 0.25;
        bad[2][2] = 0.25;
        bad[3][3] = 0.25;
        assert!(matches!(
            oracle_photon_moments(&bad, &[0.0; 4]),
            Err(QptError::NotGaussianValid(_))
        ));
    }

    #[test]
    fn finite_difference_basics() {
        let d = finite_difference(|x| Ok(x * x), 3.0, 1e-4).unwrap();
        assert!((d - 6.0).abs() < 1e-10);
        let d = finite_difference(|x| Ok(x.sin()), 0.0, 1e-4).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }
}
