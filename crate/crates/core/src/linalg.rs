//! Dense complex matrices and Hermitian spectral routines.
//!
//! Everything here is row-major and dense. Matrices in this crate are small
//! (the eigensolver only ever sees states of dimension up to a few dozen), so
//! there is no blocking or sparse path.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetry and trace tolerance for [`DensityOperator`] validation.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are treated as rounding noise and clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Sweep cap for the cyclic Jacobi eigensolver.
pub const MAX_JACOBI_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches and non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Square matrix from a list of rows.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(n, cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Rank-one projector `|psi><psi|` (not normalized).
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Square dimension, or `NotSquare`.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `M - M^dag`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && self[(i, j)] != ZERO {
                    return false;
                }
            }
        }
        true
    }

    /// Entrywise squared moduli `|M_ij|^2`, row-major.
    pub fn squared_moduli(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// `self * rho * self^dag`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        &(self * rho) * &self.dagger()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// JSON wire form: `{"rows": N, "cols": M, "data": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let data = r.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(r.rows, r.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Largest entrywise modulus of `U^dag U - I`; infinite for non-square input.
pub fn unitary_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.rows;
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            // (U^dag U)_ij = sum_k conj(U_ki) U_kj
            let mut s = ZERO;
            for k in 0..n {
                s += m[(k, i)].conj() * m[(k, j)];
            }
            if i == j {
                s -= ONE;
            }
            dev = dev.max(s.norm());
        }
    }
    dev
}

/// True iff `max |U^dag U - I| <= tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    unitary_deviation(m) <= tol
}

/// `Ok(())` if `m` is unitary within `tol`, otherwise `NotUnitary`.
pub fn ensure_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = unitary_deviation(m);
    if deviation <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary {
            deviation,
            tolerance: tol,
        })
    }
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^dag`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut s = ZERO;
            for (k, &w) in fl.iter().enumerate() {
                if w != 0.0 {
                    s += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            s
        })
    }

    /// `V diag(λ) V^dag`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Input must be Hermitian within [`HERMITIAN_TOL`]; the strictly Hermitian part
/// is what gets diagonalized. Eigenvalues come back ascending.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.square_dim()?;
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: HERMITIAN_TOL,
        });
    }

    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n == 1;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// One two-sided rotation annihilating `a[p][q]`.
///
/// The phase of `a[p][q]` is absorbed into column `q` so the 2x2 pivot block
/// becomes real symmetric, then the classic symmetric Schur rotation applies.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Rotation is negligible relative to the diagonal.
    if mag < 1e-300 || (app.abs() + mag == app.abs() && aqq.abs() + mag == aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let t = if tau == 0.0 { 1.0 } else { t };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let pc = phase.conj();
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -pc * s;
    let jqq = pc * c;

    let n = a.rows();
    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A <- J^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Clamps rounding-level negative eigenvalues to zero; errors on genuinely
/// negative ones.
pub(crate) fn clamp_psd(eigenvalues: &mut [f64]) -> Result<()> {
    for l in eigenvalues.iter_mut() {
        if *l < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: *l,
                tolerance: PSD_TOL,
            });
        }
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(())
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (all within `1e-10`).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.square_dim()?;
        let eig = hermitian_eig(&matrix)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > HERMITIAN_TOL || trace.im.abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized {
                trace: trace.re,
                tolerance: HERMITIAN_TOL,
            });
        }
        if let Some(&min) = eig.eigenvalues.first() {
            if min < -PSD_TOL {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                    tolerance: PSD_TOL,
                });
            }
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// Diagonal (incoherent) state with the given probabilities.
    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        check_distribution(probabilities, HERMITIAN_TOL)?;
        Ok(Self::new_unchecked(ComplexMatrix::from_real_diagonal(probabilities)))
    }

    /// Pure state `|psi><psi|`; `psi` must be normalized.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::InvalidMatrix("empty state vector".into()));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized {
                trace: norm,
                tolerance: HERMITIAN_TOL,
            });
        }
        Ok(Self::new_unchecked(ComplexMatrix::outer(psi)))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::new_unchecked(ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eig(&self) -> Result<HermitianEigen> {
        hermitian_eig(&self.matrix)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Checks that `p` is a probability vector within `tol`.
pub fn check_distribution(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "entry {x} is negative or not finite"
        )));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
    }
    Ok(())
}

/// Principal (PSD) square root of a density operator.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero before taking roots.
pub fn principal_sqrt(rho: &DensityOperator) -> Result<ComplexMatrix> {
    let mut eig = rho.eig()?;
    clamp_psd(&mut eig.eigenvalues)?;
    Ok(eig.reconstruct_with(f64::sqrt))
}

/// Householder QR factorization of a square matrix, `m = Q R`.
///
/// `Q` is unitary and `R` upper triangular; no sign convention is imposed on
/// the diagonal of `R`.
pub fn qr(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.square_dim()?;
    let mut r = m.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut v = vec![ZERO; n];

    for k in 0..n.saturating_sub(1) {
        let norm_x = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;

        // v = x - alpha e_k, normalized
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let norm_v = (k..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            continue;
        }
        for vi in &mut v[k..n] {
            *vi /= norm_v;
        }

        // R <- (I - 2 v v^dag) R on rows k..n
        for j in k..n {
            let mut s = ZERO;
            for i in k..n {
                s += v[i].conj() * r[(i, j)];
            }
            let s2 = s * 2.0;
            for i in k..n {
                r[(i, j)] -= v[i] * s2;
            }
        }
        // Q <- Q (I - 2 v v^dag) on columns k..n
        for i in 0..n {
            let mut s = ZERO;
            for j in k..n {
                s += q[(i, j)] * v[j];
            }
            let s2 = s * 2.0;
            for j in k..n {
                q[(i, j)] -= s2 * v[j].conj();
            }
        }
        for i in k + 1..n {
            r[(i, k)] = ZERO;
        }
    }
    Ok((q, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hadamard() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_rows(&[[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(ComplexMatrix::new(0, 1, vec![]).is_err());
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![ONE], vec![ONE, ONE]]).is_err());
    }

    #[test]
    fn eig_of_identity() {
        let eig = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0, 1.0]);
        assert!(is_unitary(&eig.eigenvectors, 1e-12));
    }

    #[test]
    fn eig_of_diagonal_is_sorted() {
        let eig = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[0.8, 0.2])).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.2, 0.8]);
        // Permutation of the identity.
        assert_abs_diff_eq!(eig.eigenvectors[(1, 0)].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eig.eigenvectors[(0, 1)].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn eig_of_pauli_x() {
        let x = ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]).unwrap();
        let eig = hermitian_eig(&x).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = &eig.eigenvectors;
        // Columns (1,-1)/sqrt2 and (1,1)/sqrt2 up to a phase.
        let ov_minus = (v[(0, 0)].conj() * h - v[(1, 0)].conj() * h).norm();
        let ov_plus = (v[(0, 1)].conj() * h + v[(1, 1)].conj() * h).norm();
        assert_abs_diff_eq!(ov_minus, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ov_plus, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_complex_offdiagonal() {
        // Pauli-Y has eigenvalues ±1 with complex eigenvectors.
        let y = ComplexMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]).unwrap();
        let eig = hermitian_eig(&y).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert!(eig.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[[ONE, ONE], [ZERO, ONE]]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn sqrt_of_diagonal() {
        let rho = DensityOperator::from_diagonal(&[0.25, 9.0 / 16.0, 3.0 / 16.0]).unwrap();
        let s = principal_sqrt(&rho).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.75, 3f64.sqrt() / 4.0]);
        assert!(s.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn sqrt_of_pure_state_is_itself() {
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let rho = DensityOperator::pure(&psi).unwrap();
        let s = principal_sqrt(&rho).unwrap();
        assert!(s.max_abs_diff(rho.matrix()) < 1e-7);
        assert!((&s * &s).max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn sqrt_round_trip_qubit() {
        let m = ComplexMatrix::from_rows(&[[c(0.5, 0.0), c(0.25, 0.0)], [c(0.25, 0.0), c(0.5, 0.0)]]).unwrap();
        let rho = DensityOperator::new(m.clone()).unwrap();
        let s = principal_sqrt(&rho).unwrap();
        assert!((&s * &s).max_abs_diff(&m) < 1e-10);
        assert!(s.hermitian_deviation() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let not_psd = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityOperator::new(not_psd),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        let not_unit = ComplexMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(
            DensityOperator::new(not_unit),
            Err(Error::NotNormalized { .. })
        ));
        // Rounding-level negativity is accepted and clamped by the square root.
        let tiny = ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11]);
        let rho = DensityOperator::new(tiny).unwrap();
        let s = principal_sqrt(&rho).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
    }

    #[test]
    fn unitary_checks() {
        assert!(is_unitary(&hadamard(), 1e-12));
        assert!(!is_unitary(&ComplexMatrix::from_real_diagonal(&[1.0, 0.999]), 1e-12));
        assert!(!is_unitary(&ComplexMatrix::zeros(2, 3), 1.0));
        assert!(matches!(
            ensure_unitary(&ComplexMatrix::from_real_diagonal(&[1.0, 2.0]), 1e-10),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn qr_reconstructs() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| {
            c((i * 3 + j) as f64 * 0.37 - 1.0, (i as f64 - j as f64) * 0.21)
        });
        let (q, r) = qr(&m).unwrap();
        assert!(is_unitary(&q, 1e-13));
        assert!((&q * &r).max_abs_diff(&m) < 1e-12);
        for i in 0..4 {
            for j in 0..i {
                assert_eq!(r[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn kron_and_json() {
        let k = hadamard().kron(&hadamard());
        assert_eq!(k.rows(), 4);
        assert!(is_unitary(&k, 1e-14));
        assert_abs_diff_eq!(k[(3, 3)].re, 0.5, epsilon = 1e-15);

        let json = serde_json::to_string(&hadamard()).unwrap();
        assert!(json.starts_with(r#"{"rows":2,"cols":2,"data":[["#));
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, hadamard());
        let bad = r#"{"rows":2,"cols":2,"data":[[1,0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
