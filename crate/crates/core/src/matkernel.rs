//! Small dense real-matrix kernels.
//!
//! Everything here is sized for the 2×2 … 16×16 systems that appear in
//! two-mode covariance dynamics: the 4×4 drift and diffusion blocks, the
//! 8×8 block-augmented propagator and the 16×16 vectorized Lyapunov
//! operator. Nothing is tuned for large or sparse problems.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Dense row-major real matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(
                "matrix must have at least one row and column".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(nrows, ncols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest `|a_ij - a_ji|`; zero for non-square input is meaningless, so
    /// callers check squareness first.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetrized(&self) -> Self {
        let mut s = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let m = 0.5 * (self[(i, j)] + self[(j, i)]);
                s[(i, j)] = m;
                s[(j, i)] = m;
            }
        }
        s
    }

    /// Copies out the `nrows × ncols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> Self {
        let mut b = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                b[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, src: &RealMatrix) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                self[(r0 + i, c0 + j)] = src[(i, j)];
            }
        }
    }

    pub fn matmul(&self, rhs: &RealMatrix) -> Result<RealMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// Determinant through LU factorization; zero for singular input.
    pub fn det(&self) -> Result<f64> {
        require_square(self, "det")?;
        Ok(Lu::factor(self).det())
    }

    fn zip_with(&self, rhs: &RealMatrix, f: impl Fn(f64, f64) -> f64) -> RealMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &RealMatrix {
    type Output = RealMatrix;

    fn add(self, rhs: &RealMatrix) -> RealMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &RealMatrix {
    type Output = RealMatrix;

    fn sub(self, rhs: &RealMatrix) -> RealMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Panics on shape mismatch; use [`RealMatrix::matmul`] for a fallible product.
impl Mul for &RealMatrix {
    type Output = RealMatrix;

    fn mul(self, rhs: &RealMatrix) -> RealMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RealMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:+.6e}", self[(i, j)]))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn require_square(a: &RealMatrix, what: &str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "{what} needs a square matrix, got {}x{}",
            a.rows, a.cols
        )))
    }
}

/// Thresholds used by the linear-algebra kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTolerances {
    /// Relative asymmetry accepted by the symmetric eigensolver.
    pub symmetry: f64,
    /// Condition estimates above this are treated as singular.
    pub max_condition: f64,
}

impl Default for KernelTolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-12,
            max_condition: 1e12,
        }
    }
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    fn factor(a: &RealMatrix) -> Self {
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l != 0.0 {
                    for j in (k + 1)..n {
                        lu[i * n + j] -= l * lu[k * n + j];
                    }
                }
            }
        }
        Self {
            n,
            lu,
            perm,
            sign,
            singular,
        }
    }

    fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.n)
            .map(|i| self.lu[i * self.n + i])
            .product::<f64>()
            * self.sign
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    fn solve_matrix(&self, b: &RealMatrix) -> RealMatrix {
        let mut out = RealMatrix::zeros(b.rows, b.cols);
        let mut col = vec![0.0; b.rows];
        for j in 0..b.cols {
            for i in 0..b.rows {
                col[i] = b[(i, j)];
            }
            for (i, v) in self.solve(&col).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    /// 1-norm condition estimate `‖A‖₁‖A⁻¹‖₁` from the explicit inverse.
    fn condition(&self, a: &RealMatrix) -> f64 {
        if self.singular {
            return f64::INFINITY;
        }
        let inv = self.solve_matrix(&RealMatrix::identity(self.n));
        let c = a.norm1() * inv.norm1();
        if c.is_finite() {
            c
        } else {
            f64::INFINITY
        }
    }
}

/// Solves `A x = b` by LU with partial pivoting and one step of iterative
/// refinement.
pub fn solve_linear(a: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    solve_linear_with(a, b, &KernelTolerances::default())
}

pub fn solve_linear_with(a: &RealMatrix, b: &[f64], tol: &KernelTolerances) -> Result<Vec<f64>> {
    require_square(a, "solve_linear")?;
    if b.len() != a.rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for a {}x{} system",
            b.len(),
            a.rows,
            a.cols
        )));
    }
    let lu = Lu::factor(a);
    let condition = lu.condition(a);
    if condition > tol.max_condition {
        return Err(Error::NoUniqueSolution { condition });
    }
    let mut x = lu.solve(b);
    let ax = a.mul_vec(&x)?;
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
    for (xi, di) in x.iter_mut().zip(lu.solve(&r)) {
        *xi += di;
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
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

// Largest 1-norm for which each diagonal Padé degree meets unit roundoff.
const THETA3: f64 = 1.495585217958292e-2;
const THETA5: f64 = 2.539_398_330_063_23e-1;
const THETA7: f64 = 9.504178996162932e-1;
const THETA9: f64 = 2.097847961257068e0;
const THETA13: f64 = 5.371920351148152e0;

/// `e^{A t}` by scaling and squaring with diagonal Padé approximants up to
/// degree 13.
pub fn mat_exp(a: &RealMatrix, t: f64) -> Result<RealMatrix> {
    require_square(a, "mat_exp")?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let n = a.rows;
    let at = a.scale(t);
    let norm = at.norm1();
    if norm == 0.0 {
        return Ok(RealMatrix::identity(n));
    }

    let ident = RealMatrix::identity(n);
    let a2 = &at * &at;

    let low_order: [(f64, &[f64]); 4] = [
        (THETA3, &PADE3),
        (THETA5, &PADE5),
        (THETA7, &PADE7),
        (THETA9, &PADE9),
    ];
    for (theta, coeffs) in low_order {
        if norm <= theta {
            let (u, v) = pade_low(&at, &a2, &ident, coeffs);
            return pade_quotient(&u, &v);
        }
    }

    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = at.scale(2f64.powi(-squarings));
    let s2 = &scaled * &scaled;
    let s4 = &s2 * &s2;
    let s6 = &s4 * &s2;
    let b = &PADE13;

    let lin = |c6: f64, c4: f64, c2: f64, c0: f64| -> RealMatrix {
        let mut m = s6.scale(c6);
        m = &m + &s4.scale(c4);
        m = &m + &s2.scale(c2);
        &m + &ident.scale(c0)
    };
    let inner_u = &s6 * &lin(b[13], b[11], b[9], 0.0);
    let u = &scaled * &(&inner_u + &lin(b[7], b[5], b[3], b[1]));
    let inner_v = &s6 * &lin(b[12], b[10], b[8], 0.0);
    let v = &inner_v + &lin(b[6], b[4], b[2], b[0]);

    let mut r = pade_quotient(&u, &v)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

fn pade_low(
    a: &RealMatrix,
    a2: &RealMatrix,
    ident: &RealMatrix,
    coeffs: &[f64],
) -> (RealMatrix, RealMatrix) {
    let n = a.rows;
    let mut u_even = RealMatrix::zeros(n, n);
    let mut v = RealMatrix::zeros(n, n);
    let mut power = ident.clone();
    for k in (0..coeffs.len()).step_by(2) {
        v = &v + &power.scale(coeffs[k]);
        u_even = &u_even + &power.scale(coeffs[k + 1]);
        power = &power * a2;
    }
    (a * &u_even, v)
}

fn pade_quotient(u: &RealMatrix, v: &RealMatrix) -> Result<RealMatrix> {
    let q = v - u;
    let p = v + u;
    let lu = Lu::factor(&q);
    if lu.singular {
        return Err(Error::NumericalDegeneracy(
            "singular Padé denominator".into(),
        ));
    }
    Ok(lu.solve_matrix(&p))
}

// ---------------------------------------------------------------------------
// Symmetric eigenvalues
// ---------------------------------------------------------------------------

/// Ascending eigenvalues of a symmetric matrix (cyclic Jacobi rotations).
pub fn sym_eigvals(s: &RealMatrix) -> Result<Vec<f64>> {
    sym_eigvals_with(s, &KernelTolerances::default())
}

pub fn sym_eigvals_with(s: &RealMatrix, tol: &KernelTolerances) -> Result<Vec<f64>> {
    require_square(s, "sym_eigvals")?;
    let scale = s.max_abs().max(1.0);
    let asym = s.asymmetry();
    if asym > tol.symmetry * scale {
        return Err(Error::Symmetry {
            asymmetry: asym,
            tolerance: tol.symmetry,
        });
    }
    let n = s.rows;
    let mut a = s.symmetrized();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

// ---------------------------------------------------------------------------
// Continuous-time Lyapunov equation
// ---------------------------------------------------------------------------

/// Solution of `Y X + X Yᵀ + Q = 0` together with its residual.
#[derive(Debug, Clone)]
pub struct LyapunovSolution {
    pub x: RealMatrix,
    /// `‖Y X + X Yᵀ + Q‖_max`.
    pub residual: f64,
    pub condition: f64,
}

/// Solves `Y X + X Yᵀ + Q = 0` through the `n² × n²` Kronecker system
/// `(I ⊗ Y + Y ⊗ I) vec X = −vec Q`.
pub fn lyapunov_solve(y: &RealMatrix, q: &RealMatrix) -> Result<LyapunovSolution> {
    lyapunov_solve_with(y, q, &KernelTolerances::default())
}

pub fn lyapunov_solve_with(
    y: &RealMatrix,
    q: &RealMatrix,
    tol: &KernelTolerances,
) -> Result<LyapunovSolution> {
    require_square(y, "lyapunov_solve")?;
    require_square(q, "lyapunov_solve")?;
    if y.rows != q.rows {
        return Err(Error::Dimension(format!(
            "drift is {0}x{0} but constant term is {1}x{1}",
            y.rows, q.rows
        )));
    }
    let scale = q.max_abs().max(1.0);
    let asym = q.asymmetry();
    if asym > tol.symmetry * scale {
        return Err(Error::Symmetry {
            asymmetry: asym,
            tolerance: tol.symmetry,
        });
    }
    let n = y.rows;
    let op = lyapunov_operator(y);
    // Row-major vec: index i*n + j holds X_ij.
    let rhs: Vec<f64> = q.as_slice().iter().map(|v| -v).collect();
    let lu = Lu::factor(&op);
    let condition = lu.condition(&op);
    if condition > tol.max_condition {
        return Err(Error::NoUniqueSolution { condition });
    }
    let mut vec_x = lu.solve(&rhs);
    let resid = |v: &[f64]| -> Vec<f64> {
        let ov = op.mul_vec(v).expect("square operator");
        rhs.iter().zip(ov).map(|(r, o)| r - o).collect()
    };
    for _ in 0..2 {
        let r = resid(&vec_x);
        for (xi, di) in vec_x.iter_mut().zip(lu.solve(&r)) {
            *xi += di;
        }
    }
    let x = RealMatrix::new(n, n, vec_x)?.symmetrized();
    let residual = lyapunov_residual(y, &x, q);
    Ok(LyapunovSolution {
        x,
        residual,
        condition,
    })
}

/// `‖Y X + X Yᵀ + Q‖_max`.
pub fn lyapunov_residual(y: &RealMatrix, x: &RealMatrix, q: &RealMatrix) -> f64 {
    let yx = y * x;
    (&(&yx + &yx.transpose()) + q).max_abs()
}

/// Matrix of `X ↦ Y X + X Yᵀ` acting on row-major `vec X`.
fn lyapunov_operator(y: &RealMatrix) -> RealMatrix {
    let n = y.rows;
    let mut op = RealMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (Y X)_ij = Σ_k Y_ik X_kj
                op[(row, k * n + j)] += y[(i, k)];
                // (X Yᵀ)_ij = Σ_k X_ik Y_jk
                op[(row, i * n + k)] += y[(j, k)];
            }
        }
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &RealMatrix, b: &RealMatrix, tol: f64) {
        let d = (a - b).max_abs();
        assert!(d < tol, "max deviation {d:e} exceeds {tol:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            RealMatrix::new(2, 2, vec![1.0; 3]),
            Err(Error::Dimension(_))
        ));
        assert_eq!(
            RealMatrix::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::NonFinite)
        );
        assert!(RealMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_exp(&RealMatrix::zeros(4, 4), 7.3).unwrap();
        assert_eq!(e, RealMatrix::identity(4));
    }

    #[test]
    fn exp_of_diagonal() {
        let e = mat_exp(&RealMatrix::from_diagonal(&[1.0, -1.0]), 1.0).unwrap();
        let want = RealMatrix::from_diagonal(&[std::f64::consts::E, (-1.0f64).exp()]);
        assert_close(&e, &want, 1e-15);
    }

    #[test]
    fn exp_of_rotation_generator() {
        // e^{[[0,1],[-1,0]] t} = [[cos t, sin t], [-sin t, cos t]]
        let a = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        for &t in &[0.001, 0.3, 2.0, 40.0, 1234.5] {
            let e = mat_exp(&a, t).unwrap();
            let want = RealMatrix::from_rows(&[[t.cos(), t.sin()], [-t.sin(), t.cos()]]).unwrap();
            assert_close(&e, &want, 1e-13 * t.max(1.0));
        }
    }

    #[test]
    fn exp_rejects_non_square() {
        assert!(matches!(
            mat_exp(&RealMatrix::zeros(2, 3), 1.0),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn eigvals_trivial() {
        assert_eq!(sym_eigvals(&RealMatrix::identity(4)).unwrap(), vec![1.0; 4]);
        let d = RealMatrix::from_diagonal(&[3.0, 1.0, 4.0, 1.0]);
        assert_eq!(sym_eigvals(&d).unwrap(), vec![1.0, 1.0, 3.0, 4.0]);
    }

    #[test]
    fn eigvals_reject_asymmetric() {
        let m = RealMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eigvals(&m), Err(Error::Symmetry { .. })));
    }

    #[test]
    fn solve_trivial_systems() {
        let x = solve_linear(&RealMatrix::identity(4), &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0, 4.0]);
        let x = solve_linear(&RealMatrix::from_diagonal(&[2.0, 4.0]), &[2.0, 2.0]).unwrap();
        assert_eq!(x, vec![1.0, 0.5]);
    }

    #[test]
    fn solve_singular_is_reported() {
        let m = RealMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve_linear(&m, &[1.0, 1.0]),
            Err(Error::NoUniqueSolution { .. })
        ));
        assert!(matches!(solve_linear(&m, &[1.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn lyapunov_scalar_case() {
        let y = RealMatrix::identity(4).scale(-1.0);
        let q = RealMatrix::identity(4).scale(4.0);
        let sol = lyapunov_solve(&y, &q).unwrap();
        assert_close(&sol.x, &RealMatrix::identity(4).scale(2.0), 1e-14);
        assert!(sol.residual < 1e-14);
    }

    #[test]
    fn lyapunov_singular_drift() {
        // Pure rotation: λ + λ̄ = 0, so the operator is singular.
        let y = RealMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let q = RealMatrix::identity(2);
        assert!(matches!(
            lyapunov_solve(&y, &q),
            Err(Error::NoUniqueSolution { .. })
        ));
    }

    #[test]
    fn determinant_via_lu() {
        let m = RealMatrix::from_rows(&[[0.0, 2.0], [3.0, 1.0]]).unwrap();
        assert!((m.det().unwrap() + 6.0).abs() < 1e-15);
    }
}
