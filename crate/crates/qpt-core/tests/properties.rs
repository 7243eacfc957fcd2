//! Property tests over randomly drawn parameters and lengths.

use proptest::prelude::*;

use qpt_core::epr::{self, EprAngles};
use qpt_core::observables::{self, QuadIndex};
use qpt_core::params::PtParams;
use qpt_core::propagator::{self, PumpPhase, QuadPair};
use qpt_core::QptError;

fn params_strategy() -> impl Strategy<Value = (f64, f64)> {
    // g in [0, 4], kappa in [0.05, 2.5]
    (0.0..4.0f64, 0.05..2.5f64)
}

proptest! {
    #[test]
    fn derived_quantities_satisfy_their_identities((g, kappa) in params_strategy()) {
        let p = PtParams::new(g, kappa).unwrap();
        let b = p.b();
        let ce = p.epsilon().cos();
        let se = p.epsilon().sin();
        prop_assert!((ce.re - b).abs() + ce.im.abs() <= 1e-12 * (1.0 + b));
        prop_assert!((se - p.beta() / kappa).norm() <= 1e-12);
        let lhs = p.beta() * p.beta() + num_complex::Complex64::new(g * g / 4.0, 0.0);
        prop_assert!((lhs.re - kappa * kappa).abs() <= 1e-12 * kappa * kappa);
        prop_assert!(lhs.im.abs() <= 1e-12 * kappa * kappa);
    }

    #[test]
    fn construction_is_bitwise_pure((g, kappa) in params_strategy()) {
        let a = PtParams::new(g, kappa).unwrap();
        let b = PtParams::new(g, kappa).unwrap();
        prop_assert_eq!(a.beta().re.to_bits(), b.beta().re.to_bits());
        prop_assert_eq!(a.beta().im.to_bits(), b.beta().im.to_bits());
        prop_assert_eq!(a.epsilon().re.to_bits(), b.epsilon().re.to_bits());
        prop_assert_eq!(a.epsilon().im.to_bits(), b.epsilon().im.to_bits());
    }

    #[test]
    fn transfer_determinants_pair_to_one((g, kappa) in params_strategy(), l in 0.0..8.0f64) {
        let p = PtParams::new(g, kappa).unwrap();
        let act = propagator::transfer(&p, l, QuadPair::QiPs);
        let pas = propagator::transfer(&p, l, QuadPair::PiQs);
        if let (Ok(a), Ok(b)) = (act, pas) {
            let prod = a.det() * b.det();
            prop_assert!((prod - 1.0).abs() <= 1e-10 * (1.0 + prod.abs()));
        }
    }

    #[test]
    fn correlation_is_a_valid_coefficient((g, kappa) in params_strategy(), l in 0.0..8.0f64) {
        let p = PtParams::new(g, kappa).unwrap();
        match observables::correlation_coefficient(&p, l, QuadIndex::Amplitude, QuadIndex::Phase, PumpPhase::Zero) {
            Ok(c) => prop_assert!((0.0..=1.0 + 1e-12).contains(&c)),
            Err(QptError::SingularLength(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn variances_respect_uncertainty((g, kappa) in params_strategy(), l in 0.0..8.0f64) {
        let p = PtParams::new(g, kappa).unwrap();
        match observables::single_mode_variances(&p, l) {
            Ok(v) => {
                prop_assert!(v.qi0 > 0.0 && v.psl > 0.0 && v.qsl > 0.0 && v.pi0 > 0.0);
                prop_assert!(v.qi0 * v.pi0 >= (1.0 / 16.0) * (1.0 - 1e-10));
                prop_assert!(v.qsl * v.psl >= (1.0 / 16.0) * (1.0 - 1e-10));
            }
            Err(QptError::SingularLength(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn noise_figure_never_below_negative_one((g, kappa) in params_strategy(), l in 0.001..8.0f64) {
        // Var[N_i - N_s] >= 0 forces NF >= -1 in the shot-noise-referenced form
        let p = PtParams::new(g, kappa).unwrap();
        match observables::noise_figure(&p, l) {
            Ok(nf) => prop_assert!(nf >= -1.0 - 1e-12),
            Err(QptError::SingularLength(_)) | Err(QptError::DegenerateFlux(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn et_depends_on_angles_only_through_the_sum(
        (g, kappa) in params_strategy(),
        l in 0.0..6.0f64,
        theta in -6.3..6.3f64,
        phi in -6.3..6.3f64,
        shift in -3.0..3.0f64,
    ) {
        let p = PtParams::new(g, kappa).unwrap();
        let a = epr::epr_criteria(&p, l, EprAngles::new(theta, phi));
        let b = epr::epr_criteria(&p, l, EprAngles::new(theta + shift, phi - shift));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a.et1 - b.et1).abs() <= 1e-10 * (1.0 + a.et1.abs()));
            prop_assert!((a.et2 - b.et2).abs() <= 1e-10 * (1.0 + a.et2.abs()));
        }
    }

    #[test]
    fn et_pair_swaps_under_sign_flip((g, kappa) in params_strategy(), l in 0.0..6.0f64, s in -6.3..6.3f64) {
        let p = PtParams::new(g, kappa).unwrap();
        let a = epr::epr_criteria(&p, l, EprAngles::new(s, 0.0));
        let b = epr::epr_criteria(&p, l, EprAngles::new(-s, 0.0));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a.et1 - b.et2).abs() <= 1e-10 * (1.0 + a.et1.abs()));
        }
    }

    #[test]
    fn optimal_value_never_beats_its_bound((g, kappa) in params_strategy(), l in 0.0..6.0f64) {
        let p = PtParams::new(g, kappa).unwrap();
        if let Ok(o) = epr::epr_optimal(&p, l) {
            prop_assert!(o.value >= o.lower_bound - 1e-10 * (1.0 + o.value.abs()));
            prop_assert!(o.lower_bound >= 0.0);
        }
    }
}
