use gravcorr_core::dynamics::propagate;
use gravcorr_core::gaussian::{
    gaussian_discord, mutual_information, symplectic_eigenvalues, CovarianceMatrix, Subsystem,
};
use gravcorr_core::matkernel::{mat_exp, RealMatrix};
use gravcorr_core::models::{
    coherent_cov, dktm_generators, ktm_generators, squeezed_cov, ModelParams,
};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = RealMatrix> {
    prop::collection::vec(-1.0f64..1.0, 16).prop_map(|v| RealMatrix::new(4, 4, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_semigroup(a in small_matrix(), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let lhs = mat_exp(&a, s + t).unwrap();
        let rhs = &mat_exp(&a, s).unwrap() * &mat_exp(&a, t).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-11 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn exponential_determinant_is_exp_trace(a in small_matrix(), t in -2.0f64..2.0) {
        let d = mat_exp(&a, t).unwrap().det().unwrap();
        let want = (a.trace() * t).exp();
        prop_assert!((d - want).abs() < 1e-11 * want);
    }

    #[test]
    fn propagated_states_stay_symmetric_and_physical(
        eta in 1e-3f64..0.1,
        alpha in 0.0f64..0.5,
        s in 0.0f64..1.5,
        tau in 0.0f64..500.0,
    ) {
        let p = ModelParams::new(eta).unwrap().with_alpha(alpha).unwrap();
        for g in [ktm_generators(&p).unwrap(), dktm_generators(&p).unwrap()] {
            let sigma = propagate(&g, &squeezed_cov(s).unwrap(), tau).unwrap();
            prop_assert_eq!(sigma.matrix().asymmetry(), 0.0);
            prop_assert!(symplectic_eigenvalues(&sigma).unwrap().nu_minus >= 1.0 - 1e-8);
        }
    }

    #[test]
    fn mode_swap_exchanges_discord_roles(tau in 0.1f64..200.0, s in 0.0f64..1.0) {
        let p = ModelParams::new(1e-2).unwrap();
        let mut m = propagate(&ktm_generators(&p).unwrap(), &squeezed_cov(s).unwrap(), tau)
            .unwrap()
            .into_matrix();
        // Break the exchange symmetry with a local thermal offset on mode 1.
        m[(0, 0)] += 0.3;
        m[(1, 1)] += 0.3;
        let sigma = CovarianceMatrix::new(m).unwrap();
        let swapped = sigma.swap_modes();
        let d1 = gaussian_discord(&sigma, Subsystem::First).unwrap();
        let d2 = gaussian_discord(&swapped, Subsystem::Second).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-12);
        prop_assert!((mutual_information(&sigma).unwrap() - mutual_information(&swapped).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn correlations_are_nonnegative(tau in 0.0f64..1000.0) {
        let p = ModelParams::new(1e-2).unwrap();
        let sigma = propagate(&ktm_generators(&p).unwrap(), &coherent_cov(), tau).unwrap();
        let d = gaussian_discord(&sigma, Subsystem::Second).unwrap();
        let i = mutual_information(&sigma).unwrap();
        prop_assert!(d >= 0.0 && i >= d - 1e-12);
    }
}

#[test]
fn model_trajectories_are_exchange_symmetric() {
    let p = ModelParams::new(1e-2).unwrap().with_alpha(0.1).unwrap();
    for g in [ktm_generators(&p).unwrap(), dktm_generators(&p).unwrap()] {
        for tau in [0.7, 1.5, 30.0, 900.0] {
            let s = propagate(&g, &squeezed_cov(0.5).unwrap(), tau).unwrap();
            let d1 = gaussian_discord(&s, Subsystem::First).unwrap();
            let d2 = gaussian_discord(&s, Subsystem::Second).unwrap();
            assert!((d1 - d2).abs() < 1e-9);
        }
    }
}

#[test]
fn pure_states_have_unit_spectrum_and_no_entropy() {
    let sigma = gravcorr_core::gaussian::two_mode_squeezed_vacuum(0.8).unwrap();
    let sp = symplectic_eigenvalues(&sigma).unwrap();
    assert!((sp.nu_minus - 1.0).abs() < 1e-8 && (sp.nu_plus - 1.0).abs() < 1e-8);
    assert_eq!(
        gravcorr_core::gaussian::entropy_f(sp.nu_minus).unwrap(),
        0.0
    );
    assert_eq!(gravcorr_core::gaussian::entropy_f(sp.nu_plus).unwrap(), 0.0);
    let product = squeezed_cov(1.2).unwrap();
    assert_eq!(mutual_information(&product).unwrap(), 0.0);
}
