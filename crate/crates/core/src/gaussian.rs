//! Two-mode Gaussian-state analytics.
//!
//! Covariance matrices use the operator order `(X₁, P₁, X₂, P₂)` and the
//! normalization in which the vacuum (and every coherent state) has
//! covariance equal to the identity. With that convention a physical state
//! has both symplectic eigenvalues `≥ 1`, and all entropies below are in
//! nats.
//!
//! Writing `σ = [[A₁, A₃], [A₃ᵀ, A₂]]` the local-symplectic invariants are
//! `I₁ = det A₁`, `I₂ = det A₂`, `I₃ = det A₃`, `I₄ = det σ`, and every
//! quantity here is a function of them alone.

use std::fmt;

use crate::error::{Error, Result};
use crate::matkernel::{sym_eigvals, RealMatrix};

/// Tolerances for accepting a matrix as a two-mode covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerance {
    /// Relative asymmetry (against `max(1, ‖σ‖_max)`) that is silently
    /// symmetrized away.
    pub symmetry: f64,
    /// Allowed shortfall of `ν₋` below 1.
    pub physical: f64,
}

impl Default for ValidationTolerance {
    fn default() -> Self {
        Self {
            symmetry: 1e-10,
            physical: 1e-8,
        }
    }
}

/// Symmetric, physical 4×4 covariance matrix.
#[derive(Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: RealMatrix,
}

impl CovarianceMatrix {
    /// Validates with the default tolerances.
    pub fn new(m: RealMatrix) -> Result<Self> {
        validate(&m)
    }

    pub fn with_tolerance(m: &RealMatrix, tol: &ValidationTolerance) -> Result<Self> {
        validate_with(m, tol)
    }

    /// Builds from a row-major 4×4 array.
    pub fn from_array(a: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(RealMatrix::from_rows(&a)?)
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Local block of mode 1.
    pub fn a1(&self) -> [[f64; 2]; 2] {
        self.block2(0, 0)
    }

    /// Local block of mode 2.
    pub fn a2(&self) -> [[f64; 2]; 2] {
        self.block2(2, 2)
    }

    /// Correlation block between the modes.
    pub fn a3(&self) -> [[f64; 2]; 2] {
        self.block2(0, 2)
    }

    fn block2(&self, r: usize, c: usize) -> [[f64; 2]; 2] {
        [
            [self.m[(r, c)], self.m[(r, c + 1)]],
            [self.m[(r + 1, c)], self.m[(r + 1, c + 1)]],
        ]
    }

    /// Relabels the modes `1 ↔ 2`.
    pub fn swap_modes(&self) -> Self {
        let perm = [2, 3, 0, 1];
        let mut out = RealMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] = self.m[(perm[i], perm[j])];
            }
        }
        Self { m: out }
    }

    /// Covariance after partial transposition of mode 2 (`P₂ → −P₂`). The
    /// result need not be physical, so it is returned as a bare matrix.
    pub fn partially_transposed(&self) -> RealMatrix {
        let flip = [1.0, 1.0, 1.0, -1.0];
        let mut out = self.m.clone();
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] *= flip[i] * flip[j];
            }
        }
        out
    }

    /// Unchecked constructor for matrices already known to be valid.
    pub(crate) fn from_trusted(m: RealMatrix) -> Self {
        Self { m }
    }
}

impl fmt::Debug for CovarianceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CovarianceMatrix({:?})", self.m)
    }
}

/// Accepts `m` as a covariance matrix under the default tolerances.
pub fn validate(m: &RealMatrix) -> Result<CovarianceMatrix> {
    validate_with(m, &ValidationTolerance::default())
}

pub fn validate_with(m: &RealMatrix, tol: &ValidationTolerance) -> Result<CovarianceMatrix> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::Dimension(format!(
            "covariance must be 4x4, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs().max(1.0);
    let asym = m.asymmetry();
    if asym > tol.symmetry * scale {
        return Err(Error::Symmetry {
            asymmetry: asym,
            tolerance: tol.symmetry,
        });
    }
    let sym = m.symmetrized();
    // ν₋ from the invariants presumes σ > 0.
    let lowest = sym_eigvals(&sym)?[0];
    if lowest <= 0.0 {
        return Err(Error::Unphysical { nu_minus: 0.0 });
    }
    let spec = spectrum_of(&sym)?;
    if spec.nu_minus < 1.0 - tol.physical {
        return Err(Error::Unphysical {
            nu_minus: spec.nu_minus,
        });
    }
    Ok(CovarianceMatrix { m: sym })
}

/// `(I₁, I₂, I₃, I₄, Δ)` with `Δ = I₁ + I₂ + 2I₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticInvariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub delta: f64,
}

impl SymplecticInvariants {
    /// Invariants with the roles of the two modes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            i1: self.i2,
            i2: self.i1,
            ..*self
        }
    }
}

pub fn symplectic_invariants(sigma: &CovarianceMatrix) -> SymplecticInvariants {
    invariants_of(&sigma.m)
}

fn det2(b: [[f64; 2]; 2]) -> f64 {
    b[0][0] * b[1][1] - b[0][1] * b[1][0]
}

fn invariants_of(m: &RealMatrix) -> SymplecticInvariants {
    let blk = |r: usize, c: usize| {
        [
            [m[(r, c)], m[(r, c + 1)]],
            [m[(r + 1, c)], m[(r + 1, c + 1)]],
        ]
    };
    let i1 = det2(blk(0, 0));
    let i2 = det2(blk(2, 2));
    let i3 = det2(blk(0, 2));
    let i4 = m.det().expect("4x4 is square");
    SymplecticInvariants {
        i1,
        i2,
        i3,
        i4,
        delta: i1 + i2 + 2.0 * i3,
    }
}

/// Symplectic eigenvalues `ν₋ ≤ ν₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

/// Symplectic eigenvalues of `σ`.
///
/// With `σ = LLᵀ`, the antisymmetric `K = LᵀΩL` is similar to `Ωσ`, so the
/// eigenvalues of `KᵀK` are `ν₋², ν₋², ν₊², ν₊²`. Unlike the closed form in
/// the invariants this stays accurate when `ν₋ ≈ ν₊` (nearly pure states).
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    spectrum_of(&sigma.m)
}

/// `2ν±² = Δ ± √(Δ² − 4I₄)`. Loses half the digits near `ν₋ = ν₊`.
pub fn symplectic_eigenvalues_from_invariants(delta: f64, i4: f64) -> Result<SymplecticSpectrum> {
    let disc = delta * delta - 4.0 * i4;
    if disc < -1e-9 * (delta * delta).max(1.0) {
        return Err(Error::NumericalDegeneracy(format!(
            "negative discriminant Δ² − 4I₄ = {disc:e} (Δ = {delta}, I₄ = {i4})"
        )));
    }
    let root = disc.max(0.0).sqrt();
    let plus_sq = 0.5 * (delta + root);
    let minus_sq = if plus_sq > 0.0 { i4 / plus_sq } else { 0.0 };
    if minus_sq < 0.0 {
        return Err(Error::NumericalDegeneracy(format!(
            "negative determinant I₄ = {i4:e}"
        )));
    }
    Ok(SymplecticSpectrum {
        nu_minus: minus_sq.sqrt(),
        nu_plus: plus_sq.sqrt(),
    })
}

fn cholesky4(m: &RealMatrix) -> Option<[[f64; 4]; 4]> {
    let mut l = [[0.0; 4]; 4];
    for j in 0..4 {
        let d = m[(j, j)] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        if !(d > 0.0) {
            return None;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..4 {
            l[i][j] = (m[(i, j)] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>()) / l[j][j];
        }
    }
    Some(l)
}

fn spectrum_of(m: &RealMatrix) -> Result<SymplecticSpectrum> {
    let l = cholesky4(m).ok_or(Error::Unphysical { nu_minus: 0.0 })?;
    // ΩL: rows (x₁,p₁,x₂,p₂) of Ω = ⊕[[0,1],[−1,0]].
    let mut ol = [[0.0; 4]; 4];
    for mode in [0, 2] {
        ol[mode] = l[mode + 1];
        ol[mode + 1] = l[mode].map(|v| -v);
    }
    let mut k = RealMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            k[(i, j)] = (0..4).map(|r| l[r][i] * ol[r][j]).sum();
        }
    }
    let ktk = (&k.transpose() * &k).symmetrized();
    let ev = sym_eigvals(&ktk)?;
    let minus_sq = 0.5 * (ev[0] + ev[1]);
    let plus_sq = 0.5 * (ev[2] + ev[3]);
    Ok(SymplecticSpectrum {
        nu_minus: minus_sq.max(0.0).sqrt(),
        nu_plus: plus_sq.max(0.0).sqrt(),
    })
}

/// Values this close below 1 are treated as exactly 1.
const UNIT_CLAMP: f64 = 1e-8;

/// Von Neumann entropy (nats) of a single-mode Gaussian state with
/// symplectic eigenvalue `x`:
/// `f(x) = ((x+1)/2) ln((x+1)/2) − ((x−1)/2) ln((x−1)/2)`.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 1.0 - UNIT_CLAMP) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "entropy function needs x ≥ 1, got {x}"
        )));
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    let p = 0.5 * (x + 1.0);
    let m = 0.5 * (x - 1.0);
    Ok(p * p.ln() - m * m.ln())
}

/// `𝓘 = f(√I₁) + f(√I₂) − f(ν₋) − f(ν₊)`.
pub fn mutual_information(sigma: &CovarianceMatrix) -> Result<f64> {
    let inv = symplectic_invariants(sigma);
    let spec = spectrum_of(&sigma.m)?;
    let value = entropy_f(inv.i1.sqrt())? + entropy_f(inv.i2.sqrt())?
        - entropy_f(spec.nu_minus)?
        - entropy_f(spec.nu_plus)?;
    Ok(value.max(0.0))
}

/// Which mode is measured in the discord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Subsystem {
    First,
    #[default]
    Second,
}

impl Subsystem {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(Error::Input(format!(
                "subsystem index must be 1 or 2, got {i}"
            ))),
        }
    }
}

/// Which inequality selects the first branch of the conditional-state
/// determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaBranch {
    /// `(I₄ − I₁I₂)² ≤ (I₂ + 1)(I₁ + I₄)I₃²`.
    #[default]
    Standard,
    /// `(I₄ − I₁I₂)² < (I₂ + 1)(I₃ + I₄)I₃²`, kept for comparison.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiscordOptions {
    pub measured: Subsystem,
    pub branch: DeltaBranch,
}

/// Gaussian discord (nats) with a measurement on `measured`.
pub fn gaussian_discord(sigma: &CovarianceMatrix, measured: Subsystem) -> Result<f64> {
    gaussian_discord_with(
        sigma,
        &DiscordOptions {
            measured,
            ..Default::default()
        },
    )
}

pub fn gaussian_discord_with(sigma: &CovarianceMatrix, opts: &DiscordOptions) -> Result<f64> {
    let mut inv = symplectic_invariants(sigma);
    if opts.measured == Subsystem::First {
        inv = inv.swapped();
    }
    let spec = spectrum_of(&sigma.m)?;
    let delta = conditional_determinant(&inv, opts.branch)?;
    let raw = entropy_f(inv.i2.sqrt())? - entropy_f(spec.nu_minus)? - entropy_f(spec.nu_plus)?
        + entropy_f(delta.sqrt())?;
    if raw < -1e-9 {
        return Err(Error::NumericalDegeneracy(format!(
            "discord evaluated to {raw:e} for invariants {inv:?}"
        )));
    }
    Ok(raw.max(0.0))
}

/// Minimum over Gaussian measurements on mode 2 of the determinant of the
/// conditional covariance of mode 1.
pub fn conditional_determinant(inv: &SymplecticInvariants, branch: DeltaBranch) -> Result<f64> {
    let SymplecticInvariants { i1, i2, i3, i4, .. } = *inv;
    let lhs = (i4 - i1 * i2).powi(2);
    let first = match branch {
        DeltaBranch::Standard => lhs <= (i2 + 1.0) * (i1 + i4) * i3 * i3,
        DeltaBranch::Paper => lhs < (i2 + 1.0) * (i3 + i4) * i3 * i3,
    };
    let value = if first {
        let b1 = i2 - 1.0;
        if b1.abs() <= 1e-14 * i2 {
            // Measured mode is pure, hence uncorrelated: conditioning is trivial.
            i1
        } else {
            let inner = i3 * i3 + b1 * (i4 - i1);
            let s = (i3.abs() + inner.max(0.0).sqrt()) / b1;
            s * s
        }
    } else {
        let inner = i3.powi(4) + (i4 - i1 * i2).powi(2) - 2.0 * i3 * i3 * (i4 + i1 * i2);
        (i1 * i2 - i3 * i3 + i4 - inner.max(0.0).sqrt()) / (2.0 * i2)
    };
    if !(value >= 1.0 - 1e-6) {
        return Err(Error::NumericalDegeneracy(format!(
            "conditional determinant {value} < 1 for invariants {inv:?}"
        )));
    }
    Ok(value.max(1.0))
}

/// Smaller symplectic eigenvalue of the partial transpose (equivalently, the
/// spectrum with `I₃ → −I₃` in `Δ`); `< 1` certifies entanglement.
pub fn ppt_min_symplectic(sigma: &CovarianceMatrix) -> Result<f64> {
    Ok(spectrum_of(&sigma.partially_transposed())?.nu_minus)
}

/// Entanglement flag threshold on `ν̃₋`.
pub const ENTANGLEMENT_TOLERANCE: f64 = 1e-8;

/// Correlation measures of one covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub mutual_information: f64,
    pub discord: f64,
    pub ppt_nu_minus: f64,
    pub entangled: bool,
}

pub fn correlations(sigma: &CovarianceMatrix, opts: &DiscordOptions) -> Result<CorrelationRecord> {
    let ppt_nu_minus = ppt_min_symplectic(sigma)?;
    Ok(CorrelationRecord {
        mutual_information: mutual_information(sigma)?,
        discord: gaussian_discord_with(sigma, opts)?,
        ppt_nu_minus,
        entangled: ppt_nu_minus < 1.0 - ENTANGLEMENT_TOLERANCE,
    })
}

/// Two-mode squeezed vacuum with squeezing `r`.
pub fn two_mode_squeezed_vacuum(r: f64) -> Result<CovarianceMatrix> {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    CovarianceMatrix::from_array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])
}
