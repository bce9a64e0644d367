//! Drift/diffusion generators for the three coupling models and the
//! initial-state builders.
//!
//! All generators act on the rescaled quadratures `(X₁, P₁, X₂, P₂)` and
//! define the flow `σ̇ = Yσ + σYᵀ + 4D`. Each block structure is symmetric
//! under the exchange of the two masses.

use log::warn;

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::matkernel::RealMatrix;

/// Dimensionless model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Gravitational coupling relative to the harmonic confinement, `K/(mω²)`.
    pub eta: f64,
    pub omega: f64,
    /// Rescaled quadrature-mixing parameter of the dissipative model.
    pub alpha_tilde: f64,
    /// Feedback rate in units of the minimal-decoherence rate `K/2`.
    pub lambda_ratio: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            eta: 1e-2,
            omega: 1.0,
            alpha_tilde: 0.0,
            lambda_ratio: 1.0,
        }
    }
}

impl ModelParams {
    pub fn new(eta: f64) -> Result<Self> {
        let p = Self {
            eta,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_alpha(mut self, alpha_tilde: f64) -> Result<Self> {
        self.alpha_tilde = alpha_tilde;
        self.validate()?;
        Ok(self)
    }

    pub fn with_lambda_ratio(mut self, c: f64) -> Result<Self> {
        self.lambda_ratio = c;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.eta, self.omega, self.alpha_tilde, self.lambda_ratio]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Input("model parameters must be finite".into()));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Input(format!(
                "eta must lie in (0, 1), got {}",
                self.eta
            )));
        }
        if self.omega <= 0.0 {
            return Err(Error::Input(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.alpha_tilde < 0.0 {
            return Err(Error::Input(format!(
                "alpha_tilde must be non-negative, got {}",
                self.alpha_tilde
            )));
        }
        if self.lambda_ratio <= 0.0 {
            return Err(Error::Input(format!(
                "lambda_ratio must be positive, got {}",
                self.lambda_ratio
            )));
        }
        if self.eta > 0.1 {
            warn!(
                "eta = {} is outside the weak-coupling regime (eta ≪ 1)",
                self.eta
            );
        }
        Ok(())
    }
}

/// Physical inputs to the linearized Newtonian coupling (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub g: f64,
    pub m1: f64,
    pub m2: f64,
    pub d: f64,
    pub omega: f64,
}

/// Newtonian constant in m³·kg⁻¹·s⁻².
pub const NEWTON_G: f64 = 6.674e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    /// Spring constant of the linearized interaction, `2G m₁m₂/d³`.
    pub k: f64,
    pub eta: f64,
}

/// `K = 2G m₁m₂/d³` and `η = K/(mω²)` with `m = √(m₁m₂)`.
pub fn derive_coupling(p: &PhysicalParams) -> Result<Coupling> {
    let all = [p.g, p.m1, p.m2, p.d, p.omega];
    if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::Input(format!(
            "physical parameters must be positive: {p:?}"
        )));
    }
    if p.m1 != p.m2 {
        warn!(
            "unequal masses ({} kg, {} kg): using the geometric mean in eta",
            p.m1, p.m2
        );
    }
    let k = 2.0 * p.g * p.m1 * p.m2 / p.d.powi(3);
    let m = (p.m1 * p.m2).sqrt();
    Ok(Coupling {
        k,
        eta: k / (m * p.omega * p.omega),
    })
}

/// Drift `Y` and diffusion `D` of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorPair {
    pub drift: RealMatrix,
    pub diffusion: RealMatrix,
}

impl GeneratorPair {
    pub fn new(drift: RealMatrix, diffusion: RealMatrix) -> Result<Self> {
        let ok = |m: &RealMatrix| m.rows() == 4 && m.cols() == 4;
        if !ok(&drift) || !ok(&diffusion) {
            return Err(Error::Dimension("generators must be 4x4".into()));
        }
        if diffusion.asymmetry() > 1e-14 * diffusion.max_abs().max(1.0) {
            return Err(Error::Symmetry {
                asymmetry: diffusion.asymmetry(),
                tolerance: 1e-14,
            });
        }
        Ok(Self { drift, diffusion })
    }
}

/// Which variant of the dissipative model's `D₁₁` momentum entry to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum D11Entry {
    /// `(ω/2)·ηω`; differs from KTM at `α̃ = 0` unless `ω = 1`.
    Paper,
    /// `ωη/2`, which reduces to the KTM diffusion when `α̃ = 0`.
    #[default]
    LimitConsistent,
}

/// Which off-diagonal `D₁₂` entry the dissipative model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum D12Entry {
    /// `(ω/2)·α̃²η/2`. Lets the trajectory become entangled.
    Paper,
    /// `(ω/2)·α̃η/2`, from the `[X_j,[P_j',ρ]]` cross terms of the master
    /// equation.
    #[default]
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DktmVariant {
    pub d11: D11Entry,
    pub d12: D12Entry,
}

/// The supported coupling models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Ktm,
    Dktm,
    Unitary,
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::Ktm => "ktm",
            Model::Dktm => "dktm",
            Model::Unitary => "unitary",
        }
    }

    pub fn generators(&self, p: &ModelParams, variant: DktmVariant) -> Result<GeneratorPair> {
        match self {
            Model::Ktm => ktm_generators(p),
            Model::Dktm => dktm_generators_with(p, variant),
            Model::Unitary => unitary_generators(p),
        }
    }
}

/// Builds the symmetric 4×4 `[[B11, B12], [B12, B11]]`.
fn exchange_symmetric(b11: [[f64; 2]; 2], b12: [[f64; 2]; 2]) -> RealMatrix {
    let mut m = RealMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = b11[i][j];
            m[(i + 2, j + 2)] = b11[i][j];
            m[(i, j + 2)] = b12[i][j];
            m[(i + 2, j)] = b12[i][j];
        }
    }
    m
}

/// Momentum diffusion entry: `(ηω/4)(c + 1/c)`, equal to `ηω/2` at `c = 1`.
fn momentum_diffusion(p: &ModelParams) -> f64 {
    let c = p.lambda_ratio;
    p.eta * p.omega / 4.0 * (c + 1.0 / c)
}

fn coupled_drift(p: &ModelParams, damp_x: f64, damp_p: f64) -> RealMatrix {
    let w = p.omega;
    exchange_symmetric(
        [[damp_x, w], [w * (p.eta - 1.0), damp_p]],
        [[0.0, 0.0], [-p.eta * w, 0.0]],
    )
}

pub fn ktm_generators(p: &ModelParams) -> Result<GeneratorPair> {
    p.validate()?;
    let drift = coupled_drift(p, 0.0, 0.0);
    let diffusion = exchange_symmetric([[0.0, 0.0], [0.0, momentum_diffusion(p)]], [[0.0; 2]; 2]);
    GeneratorPair::new(drift, diffusion)
}

pub fn dktm_generators(p: &ModelParams) -> Result<GeneratorPair> {
    dktm_generators_with(p, DktmVariant::default())
}

pub fn dktm_generators_with(p: &ModelParams, variant: DktmVariant) -> Result<GeneratorPair> {
    p.validate()?;
    let w = p.omega;
    let ae = p.alpha_tilde * p.eta;
    // Written as differences from zero so that α̃ = 0 yields +0.0, matching
    // the KTM matrices bit for bit.
    let drift = coupled_drift(p, w * ae / 2.0, 0.0 - w * 1.5 * ae);
    let d_xx = w / 2.0 * (p.alpha_tilde * ae / 2.0);
    let d_pp = match variant.d11 {
        D11Entry::LimitConsistent => momentum_diffusion(p),
        D11Entry::Paper => w / 2.0 * (p.eta * w),
    };
    let cross = match variant.d12 {
        D12Entry::Derived => w / 2.0 * (ae / 2.0),
        D12Entry::Paper => w / 2.0 * (p.alpha_tilde * ae / 2.0),
    };
    let diffusion = exchange_symmetric([[d_xx, 0.0], [0.0, d_pp]], [[0.0, cross], [cross, 0.0]]);
    GeneratorPair::new(drift, diffusion)
}

/// Newtonian coupling without the measurement-feedback dissipator.
pub fn unitary_generators(p: &ModelParams) -> Result<GeneratorPair> {
    p.validate()?;
    GeneratorPair::new(coupled_drift(p, 0.0, 0.0), RealMatrix::zeros(4, 4))
}

/// Product of coherent states; independent of the amplitudes.
pub fn coherent_cov() -> CovarianceMatrix {
    CovarianceMatrix::from_trusted(RealMatrix::identity(4))
}

/// Both masses squeezed by `s` in position: blocks `diag(eˢ, e⁻ˢ)`.
pub fn squeezed_cov(s: f64) -> Result<CovarianceMatrix> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("squeezing must be finite, got {s}")));
    }
    let (up, down) = (s.cosh() + s.sinh(), s.cosh() - s.sinh());
    CovarianceMatrix::new(RealMatrix::from_diagonal(&[up, down, up, down]))
}

/// Product of thermal states with mean occupation `nbar`.
pub fn thermal_cov(nbar: f64) -> Result<CovarianceMatrix> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::Domain(format!(
            "thermal occupation must be ≥ 0, got {nbar}"
        )));
    }
    CovarianceMatrix::new(RealMatrix::identity(4).scale(2.0 * nbar + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{
        gaussian_discord, mutual_information, symplectic_eigenvalues, Subsystem,
    };
    use crate::matkernel::sym_eigvals;

    fn p(eta: f64) -> ModelParams {
        ModelParams::new(eta).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0).is_err());
        assert!(ModelParams::new(1.0).is_err());
        assert!(ModelParams::new(f64::NAN).is_err());
        assert!(p(0.5).with_alpha(-0.1).is_err());
        assert!(p(0.5).with_lambda_ratio(0.0).is_err());
    }

    #[test]
    fn coupling_unit_plug_in() {
        let c = derive_coupling(&PhysicalParams {
            g: 1.0,
            m1: 1.0,
            m2: 1.0,
            d: 1.0,
            omega: 1.0,
        })
        .unwrap();
        assert_eq!((c.k, c.eta), (2.0, 2.0));
        let far = derive_coupling(&PhysicalParams {
            g: 1.0,
            m1: 1.0,
            m2: 1.0,
            d: 2.0,
            omega: 1.0,
        })
        .unwrap();
        assert_eq!(far.k, 2.0 / 8.0);
    }

    #[test]
    fn coupling_laboratory_values() {
        let c = derive_coupling(&PhysicalParams {
            g: NEWTON_G,
            m1: 1.0,
            m2: 1.0,
            d: 0.1,
            omega: 1.0,
        })
        .unwrap();
        assert!((c.k - 1.3348e-7).abs() < 1e-18);
        assert!((c.eta - 1.3348e-7).abs() < 1e-18);
        assert!(derive_coupling(&PhysicalParams {
            g: 1.0,
            m1: -1.0,
            m2: 1.0,
            d: 1.0,
            omega: 1.0
        })
        .is_err());
    }

    #[test]
    fn ktm_matrices_by_substitution() {
        let g = ktm_generators(&p(1e-2)).unwrap();
        let y = RealMatrix::from_rows(&[
            [0.0, 1.0, 0.0, 0.0],
            [-0.99, 0.0, -0.01, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [-0.01, 0.0, -0.99, 0.0],
        ])
        .unwrap();
        assert!((&g.drift - &y).max_abs() < 1e-16);
        let d = RealMatrix::from_diagonal(&[0.0, 0.005, 0.0, 0.005]);
        assert!((&g.diffusion - &d).max_abs() < 1e-18);
    }

    #[test]
    fn lambda_ratio_generalization() {
        let g = ktm_generators(&p(1e-2).with_lambda_ratio(2.0).unwrap()).unwrap();
        assert!((g.diffusion[(1, 1)] - 0.00625).abs() < 1e-17);
        assert!((g.diffusion[(3, 3)] - 0.00625).abs() < 1e-17);
        let at_one = ktm_generators(&p(1e-2)).unwrap().diffusion[(1, 1)];
        for c in [0.2, 0.5, 0.9, 1.1, 3.0, 10.0] {
            let d = ktm_generators(&p(1e-2).with_lambda_ratio(c).unwrap()).unwrap();
            assert!(d.diffusion[(1, 1)] > at_one);
        }
    }

    #[test]
    fn dktm_reduces_to_ktm_bitwise() {
        for eta in [1e-3, 1e-2, 0.05] {
            let k = ktm_generators(&p(eta)).unwrap();
            let d = dktm_generators(&p(eta)).unwrap();
            let bits =
                |m: &RealMatrix| m.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&k.drift), bits(&d.drift));
            assert_eq!(bits(&k.diffusion), bits(&d.diffusion));
        }
    }

    #[test]
    fn dktm_drift_block() {
        let g = dktm_generators(&p(1e-2).with_alpha(0.1).unwrap()).unwrap();
        let want = [[0.0005, 1.0], [-0.99, -0.0015]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.drift[(i, j)] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dktm_diffusion_variants() {
        let params = p(1e-2).with_alpha(0.1).unwrap();
        let derived = dktm_generators(&params).unwrap().diffusion;
        assert!((derived[(0, 0)] - 0.1 * 0.1 * 0.01 / 4.0).abs() < 1e-18);
        assert!((derived[(0, 3)] - 0.1 * 0.01 / 4.0).abs() < 1e-18);
        let alt = dktm_generators_with(
            &params,
            DktmVariant {
                d11: D11Entry::Paper,
                d12: D12Entry::Paper,
            },
        )
        .unwrap()
        .diffusion;
        assert!((alt[(0, 3)] - 0.1 * 0.1 * 0.01 / 4.0).abs() < 1e-18);
        let scaled = ModelParams {
            omega: 2.0,
            ..params
        };
        let d11 = dktm_generators_with(
            &scaled,
            DktmVariant {
                d11: D11Entry::Paper,
                ..Default::default()
            },
        )
        .unwrap()
        .diffusion;
        assert!((d11[(1, 1)] - 2.0 / 2.0 * 0.01 * 2.0).abs() < 1e-16);
    }

    #[test]
    fn diffusion_is_positive_semidefinite() {
        for alpha in [0.0, 0.05, 0.1, 0.2, 0.9] {
            let g = dktm_generators(&p(1e-2).with_alpha(alpha).unwrap()).unwrap();
            assert!(sym_eigvals(&g.diffusion).unwrap()[0] >= -1e-12);
        }
    }

    #[test]
    fn unitary_shares_ktm_drift() {
        let u = unitary_generators(&p(1e-2)).unwrap();
        assert_eq!(u.drift, ktm_generators(&p(1e-2)).unwrap().drift);
        assert_eq!(u.diffusion, RealMatrix::zeros(4, 4));
    }

    #[test]
    fn initial_states() {
        let c = coherent_cov();
        assert_eq!(c.matrix(), &RealMatrix::identity(4));
        assert!(crate::gaussian::validate(c.matrix()).is_ok());
        assert_eq!(mutual_information(&c).unwrap(), 0.0);
        assert_eq!(gaussian_discord(&c, Subsystem::Second).unwrap(), 0.0);

        assert_eq!(
            squeezed_cov(0.0).unwrap().matrix(),
            &RealMatrix::identity(4)
        );
        let s1 = squeezed_cov(1.0).unwrap();
        assert!((s1.get(0, 0) - std::f64::consts::E).abs() < 1e-15);
        assert!((s1.get(1, 1) - (-1.0f64).exp()).abs() < 1e-15);
        for s in [0.3, 1.0, 2.0, 3.0] {
            let sp = symplectic_eigenvalues(&squeezed_cov(s).unwrap()).unwrap();
            assert!((sp.nu_minus - 1.0).abs() < 1e-8 && (sp.nu_plus - 1.0).abs() < 1e-8);
        }
        assert!(squeezed_cov(f64::INFINITY).is_err());
    }

    #[test]
    fn thermal_states() {
        assert_eq!(thermal_cov(0.0).unwrap().matrix(), &RealMatrix::identity(4));
        let t = thermal_cov(1.0).unwrap();
        assert_eq!(t.matrix(), &RealMatrix::identity(4).scale(3.0));
        let sp = symplectic_eigenvalues(&t).unwrap();
        assert!((sp.nu_minus - 3.0).abs() < 1e-12 && (sp.nu_plus - 3.0).abs() < 1e-12);
        assert!(matches!(thermal_cov(-0.5), Err(Error::Domain(_))));
    }
}
