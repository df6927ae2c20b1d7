//! Skew information and the skew-information coherence `C_S` in the
//! computational basis.
//!
//! `C_S(ρ) = Σ_k I(ρ, |k><k|) = 1 - Σ_k <k|√ρ|k>²`.

use crate::error::{Error, Result};
use crate::linalg::{check_distribution, clamp_psd, ensure_unitary, ComplexMatrix, DensityOperator, HERMITIAN_TOL};

/// Tolerance used to accept a unitary in [`c_s_diagonal_conjugated`].
pub const UNITARY_TOL: f64 = 1e-10;

/// Diagonal of `√ρ` in the computational basis, from one eigendecomposition.
///
/// `<k|√ρ|k> = Σ_i |V_ki|² √λ_i`.
pub fn sqrt_diagonal(rho: &DensityOperator) -> Result<Vec<f64>> {
    let mut eig = rho.eig()?;
    clamp_psd(&mut eig.eigenvalues)?;
    let n = rho.dim();
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|l| l.sqrt()).collect();
    let v = &eig.eigenvectors;
    Ok((0..n)
        .map(|k| v.row(k).iter().zip(&roots).map(|(z, r)| z.norm_sqr() * r).sum())
        .collect())
}

/// Wigner–Yanase skew information `I(ρ, |k><k|) = <k|ρ|k> - <k|√ρ|k>²`.
pub fn skew_information(rho: &DensityOperator, k: usize) -> Result<f64> {
    let n = rho.dim();
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "basis index {k} out of range for dimension {n}"
        )));
    }
    if rho.matrix().is_diagonal() {
        return Ok(0.0);
    }
    let d = sqrt_diagonal(rho)?;
    Ok(rho.matrix()[(k, k)].re - d[k] * d[k])
}

/// Skew-information coherence `C_S(ρ)`.
///
/// Exactly diagonal input returns exactly zero.
pub fn c_s(rho: &DensityOperator) -> Result<f64> {
    if rho.matrix().is_diagonal() {
        return Ok(0.0);
    }
    let d = sqrt_diagonal(rho)?;
    Ok(1.0 - d.iter().map(|x| x * x).sum::<f64>())
}

/// `C_S(U diag(λ) U^dag)` without an eigensolve:
/// `1 - Σ_k (Σ_i |U_ki|² √λ_i)²`.
pub fn c_s_diagonal_conjugated(u: &ComplexMatrix, lambdas: &[f64]) -> Result<f64> {
    let n = u.square_dim()?;
    ensure_unitary(u, UNITARY_TOL)?;
    if lambdas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lambdas.len(),
        });
    }
    check_distribution(lambdas, HERMITIAN_TOL)?;
    Ok(ConjugatedCoherence::new(u).evaluate(lambdas))
}

/// Precomputed `|U_ki|²` for repeated evaluation of `C_S(U Λ U^dag)` over
/// many spectra.
#[derive(Debug, Clone)]
pub struct ConjugatedCoherence {
    n: usize,
    weights: Vec<f64>,
    // Every row of |U|² has at most one nonzero entry, so U Λ U^dag is always diagonal.
    incoherent: bool,
}

impl ConjugatedCoherence {
    /// `u` is assumed unitary; validate before calling.
    pub fn new(u: &ComplexMatrix) -> Self {
        let n = u.rows();
        let weights = u.squared_moduli();
        let incoherent = weights
            .chunks(n)
            .all(|row| row.iter().filter(|w| **w != 0.0).count() <= 1);
        Self { n, weights, incoherent }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// True when the unitary maps every incoherent state to an incoherent one.
    pub fn is_incoherent(&self) -> bool {
        self.incoherent
    }

    pub fn evaluate(&self, lambdas: &[f64]) -> f64 {
        if self.incoherent {
            return 0.0;
        }
        let roots: Vec<f64> = lambdas.iter().map(|l| l.max(0.0).sqrt()).collect();
        let sum_sq: f64 = self
            .weights
            .chunks(self.n)
            .map(|row| {
                let d: f64 = row.iter().zip(&roots).map(|(w, r)| w * r).sum();
                d * d
            })
            .sum();
        1.0 - sum_sq
    }
}
