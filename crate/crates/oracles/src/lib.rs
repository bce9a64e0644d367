//! Slow, independent reference implementations used only by tests.
//!
//! Everything here works on `nalgebra::DMatrix<f64>` and shares no code with
//! the production kernels.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use nalgebra;

pub type Mat = DMatrix<f64>;

pub fn from_row_major(n: usize, m: usize, data: &[f64]) -> Mat {
    DMatrix::from_row_slice(n, m, data)
}

pub fn to_row_major(a: &Mat) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out.push(a[(i, j)]);
        }
    }
    out
}

/// Taylor series of `exp(a t)` with scaling and squaring.
pub fn taylor_expm(a: &Mat, t: f64) -> Mat {
    let n = a.nrows();
    let at = a * t;
    let norm = at.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.125 {
        squarings += 1;
    }
    let x = at / 2f64.powi(squarings);
    let mut term = Mat::identity(n, n);
    let mut sum = Mat::identity(n, n);
    for k in 1..40 {
        term = &term * &x / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Classical RK4 integration of `σ̇ = Yσ + σYᵀ + 4D` for two modes.
pub fn rk4_covariance(y: &Mat, d: &Mat, sigma0: &Mat, tau: f64, steps: usize) -> Mat {
    let y: Matrix4<f64> = y.fixed_view::<4, 4>(0, 0).into_owned();
    let q: Matrix4<f64> = d.fixed_view::<4, 4>(0, 0) * 4.0;
    let rhs = |s: &Matrix4<f64>| y * s + s * y.transpose() + q;
    let h = tau / steps as f64;
    let mut s: Matrix4<f64> = sigma0.fixed_view::<4, 4>(0, 0).into_owned();
    for _ in 0..steps {
        let k1 = rhs(&s);
        let k2 = rhs(&(s + k1 * (h / 2.0)));
        let k3 = rhs(&(s + k2 * (h / 2.0)));
        let k4 = rhs(&(s + k3 * h));
        s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Mat::from_iterator(4, 4, s.iter().copied())
}

/// Laplace expansion along the first row.
pub fn cofactor_det(a: &Mat) -> f64 {
    let n = a.nrows();
    if n == 1 {
        return a[(0, 0)];
    }
    (0..n)
        .map(|j| {
            let minor = a.clone().remove_row(0).remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * a[(0, j)] * cofactor_det(&minor)
        })
        .sum()
}

/// Coefficients `c₀..c_n` (with `c_n = 1`) of `det(λI − a)` by
/// Faddeev–LeVerrier.
pub fn char_poly(a: &Mat) -> Vec<f64> {
    let n = a.nrows();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        m = a * &m + Mat::identity(n, n) * coeffs[n - k + 1];
        coeffs[n - k] = -(a * &m).trace() / k as f64;
    }
    coeffs
}

/// Real parts of the roots of a monic polynomial, ascending, through the
/// companion matrix.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    let mut c = Mat::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        c[(i, n - 1)] = -coeffs[i] / coeffs[n];
    }
    let mut roots: Vec<f64> = c.complex_eigenvalues().iter().map(|z| z.re).collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

fn omega(n_modes: usize) -> Mat {
    let mut w = Mat::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// Symplectic eigenvalues as the moduli of the eigenvalues of `Ωσ`,
/// ascending, one per mode.
pub fn symplectic_spectrum(sigma: &Mat) -> Vec<f64> {
    let modes = sigma.nrows() / 2;
    let mut moduli: Vec<f64> = (omega(modes) * sigma)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Entropy of a thermal mode with symplectic eigenvalue `nu`, written in
/// occupation-number form `(n+1) ln(n+1) − n ln n`.
pub fn mode_entropy(nu: f64) -> f64 {
    let n = ((nu - 1.0) / 2.0).max(0.0);
    if n == 0.0 {
        0.0
    } else {
        (n + 1.0) * (n + 1.0).ln() - n * n.ln()
    }
}

fn block(sigma: &Mat, r: usize, c: usize) -> Matrix2<f64> {
    Matrix2::new(
        sigma[(r, c)],
        sigma[(r, c + 1)],
        sigma[(r + 1, c)],
        sigma[(r + 1, c + 1)],
    )
}

/// Von Neumann entropy of an `n`-mode Gaussian state.
pub fn entropy(sigma: &Mat) -> f64 {
    symplectic_spectrum(sigma)
        .into_iter()
        .map(mode_entropy)
        .sum()
}

pub fn mutual_information(sigma: &Mat) -> f64 {
    let a = block(sigma, 0, 0).determinant().sqrt();
    let b = block(sigma, 2, 2).determinant().sqrt();
    mode_entropy(a) + mode_entropy(b) - entropy(sigma)
}

/// Determinant of the conditional covariance of mode 1 after a pure
/// Gaussian measurement on mode 2 with seed `diag(λ, 1/λ)` rotated by θ.
fn conditional_det(sigma: &Mat, ln_lambda: f64, theta: f64) -> f64 {
    let alpha = block(sigma, 0, 0);
    let beta = block(sigma, 2, 2);
    let gamma = block(sigma, 0, 2);
    let (c, s) = (theta.cos(), theta.sin());
    let rot = Matrix2::new(c, -s, s, c);
    let lam = ln_lambda.exp();
    let seed = rot * Matrix2::new(lam, 0.0, 0.0, 1.0 / lam) * rot.transpose();
    let inv = (beta + seed)
        .try_inverse()
        .expect("β + M is positive definite");
    (alpha - gamma * inv * gamma.transpose()).determinant()
}

/// Gaussian discord with a measurement on mode 2 by brute-force
/// minimization over pure single-mode Gaussian measurements.
pub fn brute_force_discord(sigma: &Mat) -> f64 {
    let beta = block(sigma, 2, 2).determinant().sqrt();
    let (lo, hi, n_l, n_t) = (-18.0, 18.0, 145, 90);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=n_l {
        let l = lo + (hi - lo) * i as f64 / n_l as f64;
        for j in 0..n_t {
            let t = std::f64::consts::PI * j as f64 / n_t as f64;
            let v = conditional_det(sigma, l, t);
            if v < best.0 {
                best = (v, l, t);
            }
        }
    }
    // Compass search refinement.
    let (mut v, mut l, mut t) = best;
    let (mut dl, mut dt) = (0.25, 0.05);
    while dl > 1e-10 || dt > 1e-10 {
        let mut improved = false;
        for (sl, st) in [(dl, 0.0), (-dl, 0.0), (0.0, dt), (0.0, -dt)] {
            let cand = conditional_det(sigma, (l + sl).clamp(lo, hi), t + st);
            if cand < v {
                v = cand;
                l = (l + sl).clamp(lo, hi);
                t += st;
                improved = true;
                break;
            }
        }
        if !improved {
            dl *= 0.5;
            dt *= 0.5;
        }
    }
    mode_entropy(beta) - entropy(sigma) + mode_entropy(v.max(1.0).sqrt())
}

/// Seeded generator of random physical two-mode covariance matrices:
/// thermal diagonal, local squeezers and rotations, a beam splitter, then
/// another local layer.
pub struct RandomStates {
    rng: ChaCha8Rng,
}

impl RandomStates {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn local_layer(&mut self) -> Mat {
        let mut s = Mat::zeros(4, 4);
        for k in 0..2 {
            let r: f64 = self.rng.gen_range(-1.0..1.0);
            let phi: f64 = self.rng.gen_range(0.0..std::f64::consts::TAU);
            let rot = Matrix2::new(phi.cos(), -phi.sin(), phi.sin(), phi.cos());
            let sq = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
            let m = rot * sq;
            for i in 0..2 {
                for j in 0..2 {
                    s[(2 * k + i, 2 * k + j)] = m[(i, j)];
                }
            }
        }
        s
    }

    fn beam_splitter(&mut self) -> Mat {
        let th: f64 = self.rng.gen_range(0.0..std::f64::consts::PI);
        let (c, s) = (th.cos(), th.sin());
        let mut b = Mat::identity(4, 4) * c;
        for i in 0..2 {
            b[(i, i + 2)] = s;
            b[(i + 2, i)] = -s;
        }
        b
    }

    pub fn next_covariance(&mut self) -> Mat {
        let n1: f64 = 1.0 + self.rng.gen_range(0.0..3.0);
        let n2: f64 = 1.0 + self.rng.gen_range(0.0..3.0);
        let thermal = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![n1, n1, n2, n2]));
        let s = self.local_layer() * self.beam_splitter() * self.local_layer();
        let sigma = &s * thermal * s.transpose();
        (&sigma + sigma.transpose()) * 0.5
    }
}
