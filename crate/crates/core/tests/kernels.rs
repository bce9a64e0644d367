use gravcorr_core::matkernel::{
    lyapunov_residual, lyapunov_solve, mat_exp, solve_linear, sym_eigvals, RealMatrix,
};
use gravcorr_core::models::{dktm_generators, ktm_generators, ModelParams};
use gravcorr_oracles as oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_oracle(m: &RealMatrix) -> oracle::Mat {
    oracle::from_row_major(m.rows(), m.cols(), m.as_slice())
}

fn max_diff(a: &RealMatrix, b: &oracle::Mat) -> f64 {
    a.as_slice()
        .iter()
        .zip(oracle::to_row_major(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn exponential_matches_taylor_oracle_on_ktm_drift() {
    let p = ModelParams::new(1e-2).unwrap();
    let y = ktm_generators(&p).unwrap().drift;
    for t in [0.1, 2.0, 10.0] {
        let e = mat_exp(&y, t).unwrap();
        let want = oracle::taylor_expm(&to_oracle(&y), t);
        assert!(max_diff(&e, &want) < 1e-12, "t = {t}");
    }
}

#[test]
fn exponential_matches_taylor_oracle_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 4, 8] {
        for scale in [0.01, 0.5, 3.0, 20.0] {
            let data: Vec<f64> = (0..n * n)
                .map(|_| rng.gen_range(-1.0..1.0) * scale / n as f64)
                .collect();
            let a = RealMatrix::new(n, n, data).unwrap();
            let e = mat_exp(&a, 1.0).unwrap();
            let want = oracle::taylor_expm(&to_oracle(&a), 1.0);
            let rel = max_diff(&e, &want) / want.amax().max(1.0);
            assert!(rel < 1e-11, "n = {n}, scale = {scale}: {rel:e}");
        }
    }
}

#[test]
fn eigenvalues_match_characteristic_polynomial_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let b: Vec<f64> = (0..16).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let b = RealMatrix::new(4, 4, b).unwrap();
        let s = &b * &b.transpose();
        let ev = sym_eigvals(&s).unwrap();
        let roots = oracle::real_roots(&oracle::char_poly(&to_oracle(&s)));
        for (x, r) in ev.iter().zip(&roots) {
            assert!(
                (x - r).abs() < 1e-9 * s.max_abs().max(1.0),
                "{ev:?} vs {roots:?}"
            );
        }
    }
}

#[test]
fn determinant_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=6 {
        let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let a = RealMatrix::new(n, n, data).unwrap();
        let want = oracle::cofactor_det(&to_oracle(&a));
        assert!((a.det().unwrap() - want).abs() < 1e-10 * want.abs().max(1.0));
    }
}

#[test]
fn linear_solve_residual_on_16x16() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 16;
    let mut data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for i in 0..n {
        data[i * n + i] += 4.0;
    }
    let a = RealMatrix::new(n, n, data).unwrap();
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let x = solve_linear(&a, &b).unwrap();
    let ax = a.mul_vec(&x).unwrap();
    let res = ax
        .iter()
        .zip(&b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    assert!(res < 1e-13, "{res:e}");
    let want = to_oracle(&a)
        .lu()
        .solve(&oracle::nalgebra::DVector::from_vec(b.clone()))
        .unwrap();
    for (u, v) in x.iter().zip(want.iter()) {
        assert!((u - v).abs() < 1e-12);
    }
}

#[test]
fn lyapunov_residual_on_dissipative_generators() {
    for alpha in [0.05, 0.1, 0.2, 0.5] {
        let p = ModelParams::new(1e-2).unwrap().with_alpha(alpha).unwrap();
        let g = dktm_generators(&p).unwrap();
        let q = g.diffusion.scale(4.0);
        let sol = lyapunov_solve(&g.drift, &q).unwrap();
        assert!(sol.residual < 1e-10, "alpha = {alpha}: {:e}", sol.residual);
        assert!(lyapunov_residual(&g.drift, &sol.x, &q) < 1e-10);
    }
}

#[test]
fn exponential_determinant_on_model_drifts() {
    let p = ModelParams::new(1e-2).unwrap().with_alpha(0.1).unwrap();
    let drifts = [
        ktm_generators(&p).unwrap().drift,
        dktm_generators(&p).unwrap().drift,
        gravcorr_core::models::unitary_generators(&p).unwrap().drift,
    ];
    for y in &drifts {
        for t in [0.5, 5.0, 50.0, 500.0] {
            let d = mat_exp(y, t).unwrap().det().unwrap();
            let want = (y.trace() * t).exp();
            assert!((d - want).abs() < 1e-8 * want, "t = {t}: {d} vs {want}");
        }
    }
}

#[test]
fn lyapunov_solution_is_symmetric() {
    let p = ModelParams::new(1e-2).unwrap().with_alpha(0.1).unwrap();
    let g = dktm_generators(&p).unwrap();
    let sol = lyapunov_solve(&g.drift, &g.diffusion.scale(4.0)).unwrap();
    assert!(sol.x.asymmetry() <= 1e-12 * sol.x.max_abs());
}

#[test]
fn eigenvalues_of_propagated_states_sum_to_trace() {
    let p = ModelParams::new(1e-2).unwrap().with_alpha(0.1).unwrap();
    for g in [ktm_generators(&p).unwrap(), dktm_generators(&p).unwrap()] {
        for t in [1.0, 10.0, 1000.0] {
            let s = gravcorr_core::dynamics::propagate(
                &g,
                &gravcorr_core::models::squeezed_cov(0.5).unwrap(),
                t,
            )
            .unwrap();
            let ev = sym_eigvals(s.matrix()).unwrap();
            assert!(ev.iter().all(|v| v.is_finite() && *v > 0.0));
            assert!((ev.iter().sum::<f64>() - s.trace()).abs() < 1e-9 * s.trace());
        }
    }
}
