//! Exact propagation of the covariance matrix under a [`GeneratorPair`].
//!
//! The affine flow `σ̇ = Yσ + σYᵀ + 4D` is integrated in closed form:
//!
//! ```text
//! σ(τ) = F σ₀ Fᵀ + ∫₀^τ e^{Ys} 4D e^{Yᵀs} ds,   F = e^{Yτ}
//! ```
//!
//! Both pieces come out of one exponential of the 8×8 block matrix
//! `[[Y, 4D], [0, −Yᵀ]]·τ`: its top-left block is `F` and its top-right block
//! `G` satisfies `G Fᵀ = ∫₀^τ e^{Ys} 4D e^{Yᵀs} ds`.

use crate::error::{Error, Result};
use crate::gaussian::{
    symplectic_eigenvalues, validate_with, CovarianceMatrix, ValidationTolerance,
};
use crate::matkernel::{lyapunov_solve, mat_exp, RealMatrix};
use crate::models::{GeneratorPair, ModelParams};

/// Physicality slack granted to propagated states.
pub const PROPAGATION_TOLERANCE: f64 = 1e-6;

fn propagated_tolerance() -> ValidationTolerance {
    ValidationTolerance {
        symmetry: 1e-10,
        physical: PROPAGATION_TOLERANCE,
    }
}

/// `σ(τ)` from `σ₀` under `gen`.
pub fn propagate(
    gen: &GeneratorPair,
    sigma0: &CovarianceMatrix,
    tau: f64,
) -> Result<CovarianceMatrix> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::Domain(format!(
            "tau must be finite and non-negative, got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(sigma0.clone());
    }
    let (f, integral) = propagator(gen, tau)?;
    let s0 = sigma0.matrix();
    let evolved = &(&(&f * s0) * &f.transpose()) + &integral;
    accept(evolved.symmetrized(), tau)
}

/// Returns `(e^{Yτ}, ∫₀^τ e^{Ys} 4D e^{Yᵀs} ds)`.
fn propagator(gen: &GeneratorPair, tau: f64) -> Result<(RealMatrix, RealMatrix)> {
    let mut aug = RealMatrix::zeros(8, 8);
    aug.set_block(0, 0, &gen.drift);
    aug.set_block(0, 4, &gen.diffusion.scale(4.0));
    aug.set_block(4, 4, &gen.drift.transpose().scale(-1.0));
    let e = mat_exp(&aug, tau)?;
    let f = e.block(0, 0, 4, 4);
    let g = e.block(0, 4, 4, 4);
    let integral = &g * &f.transpose();
    Ok((f, integral))
}

fn accept(m: RealMatrix, tau: f64) -> Result<CovarianceMatrix> {
    match validate_with(&m, &propagated_tolerance()) {
        Ok(s) => Ok(s),
        Err(Error::Unphysical { nu_minus }) => Err(Error::PropagationAccuracy { tau, nu_minus }),
        Err(e) => Err(e),
    }
}

/// `Yσ + σYᵀ + 4D`, the right-hand side of the flow.
pub fn lyapunov_rhs(gen: &GeneratorPair, sigma: &RealMatrix) -> RealMatrix {
    let ys = &gen.drift * sigma;
    &(&ys + &ys.transpose()) + &gen.diffusion.scale(4.0)
}

/// First moments evolve as `d⟨O⟩/dτ = Y⟨O⟩`.
pub fn propagate_mean(gen: &GeneratorPair, mean0: [f64; 4], tau: f64) -> Result<[f64; 4]> {
    if mean0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let f = mat_exp(&gen.drift, tau)?;
    let v = f.mul_vec(&mean0)?;
    Ok([v[0], v[1], v[2], v[3]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Sample placement for a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    pub tau_max: f64,
    pub n_samples: usize,
    pub spacing: Spacing,
    /// First log-spaced sample sits at `tau_max · log_start_fraction`.
    pub log_start_fraction: f64,
    /// Step each sample from the previous one instead of from `τ = 0`.
    pub chained: bool,
}

impl SamplingGrid {
    pub fn linear(tau_max: f64, n_samples: usize) -> Self {
        Self {
            tau_max,
            n_samples,
            spacing: Spacing::Linear,
            log_start_fraction: 1e-6,
            chained: false,
        }
    }

    pub fn log(tau_max: f64, n_samples: usize) -> Self {
        Self {
            spacing: Spacing::Log,
            ..Self::linear(tau_max, n_samples)
        }
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        if !(self.tau_max > 0.0) || !self.tau_max.is_finite() {
            return Err(Error::Input(format!(
                "tau_max must be positive, got {}",
                self.tau_max
            )));
        }
        if self.n_samples < 2 {
            return Err(Error::Input(format!(
                "need at least 2 samples, got {}",
                self.n_samples
            )));
        }
        let last = (self.n_samples - 1) as f64;
        let times: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..self.n_samples)
                .map(|k| {
                    if k + 1 == self.n_samples {
                        self.tau_max
                    } else {
                        self.tau_max * k as f64 / last
                    }
                })
                .collect(),
            Spacing::Log => {
                let f = self.log_start_fraction;
                if !(f > 0.0 && f < 1.0) {
                    return Err(Error::Input(format!(
                        "log start fraction must be in (0, 1), got {f}"
                    )));
                }
                let (lo, hi) = ((self.tau_max * f).ln(), self.tau_max.ln());
                (0..self.n_samples)
                    .map(|k| {
                        if k + 1 == self.n_samples {
                            self.tau_max
                        } else {
                            (lo + (hi - lo) * k as f64 / last).exp()
                        }
                    })
                    .collect()
            }
        };
        Ok(times)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub tau: f64,
    pub sigma: CovarianceMatrix,
}

/// Time-ordered covariance samples of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model_label: String,
    pub params: Option<ModelParams>,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn new(
        model_label: impl Into<String>,
        params: Option<ModelParams>,
        samples: Vec<Sample>,
    ) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[1].tau > w[0].tau)) {
            return Err(Error::Input(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            model_label: model_label.into(),
            params,
            samples,
        })
    }

    pub fn labeled(mut self, label: impl Into<String>, params: ModelParams) -> Self {
        self.model_label = label.into();
        self.params = Some(params);
        self
    }

    pub fn taus(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.tau).collect()
    }
}

/// Samples `σ(τ)` on `grid`. Each sample is propagated from `τ = 0`
/// unless `grid.chained` is set.
pub fn evolve_series(
    gen: &GeneratorPair,
    sigma0: &CovarianceMatrix,
    grid: &SamplingGrid,
) -> Result<Trajectory> {
    let times = grid.times()?;
    let mut samples = Vec::with_capacity(times.len());
    let mut prev: Option<(f64, CovarianceMatrix)> = None;
    for &tau in &times {
        let sigma = match (&prev, grid.chained) {
            (Some((t0, s)), true) => propagate(gen, s, tau - t0)?,
            _ => propagate(gen, sigma0, tau)?,
        };
        if grid.chained {
            prev = Some((tau, sigma.clone()));
        }
        samples.push(Sample { tau, sigma });
    }
    Trajectory::new("custom", None, samples)
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub sigma: CovarianceMatrix,
    /// `‖Yσ + σYᵀ + 4D‖_max`.
    pub residual: f64,
}

/// Unique stationary covariance, `Yσ + σYᵀ + 4D = 0`.
pub fn steady_state(gen: &GeneratorPair) -> Result<SteadyState> {
    let sol = lyapunov_solve(&gen.drift, &gen.diffusion.scale(4.0))?;
    let sigma = validate_with(&sol.x, &propagated_tolerance())?;
    Ok(SteadyState {
        sigma,
        residual: sol.residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divergence {
    /// Least-squares slope of `trace σ` against `τ` over the second half.
    pub slope: f64,
    pub diverging: bool,
}

/// Relative slope, per unit `τ` and per unit initial trace, above which a
/// trajectory counts as heating without bound.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-3;

pub fn divergence_metric(traj: &Trajectory) -> Result<Divergence> {
    if traj.samples.len() < 10 {
        return Err(Error::Input(format!(
            "divergence needs at least 10 samples, got {}",
            traj.samples.len()
        )));
    }
    let first = &traj.samples[0];
    let last_tau = traj.samples.last().map(|s| s.tau).unwrap_or_default();
    let half = first.tau + 0.5 * (last_tau - first.tau);
    let pts: Vec<(f64, f64)> = traj
        .samples
        .iter()
        .filter(|s| s.tau >= half)
        .map(|s| (s.tau, s.sigma.trace()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Input(
            "final half of the trajectory holds fewer than 2 samples".into(),
        ));
    }
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Ok(Divergence {
        slope,
        diverging: slope > DIVERGENCE_THRESHOLD * first.sigma.trace(),
    })
}

/// Smallest symplectic eigenvalue along a trajectory.
pub fn min_nu_minus(traj: &Trajectory) -> Result<f64> {
    traj.samples
        .iter()
        .map(|s| symplectic_eigenvalues(&s.sigma).map(|sp| sp.nu_minus))
        .try_fold(f64::INFINITY, |m, v| v.map(|v| m.min(v)))
}
