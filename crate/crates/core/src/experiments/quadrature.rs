//! Deterministic qubit oracle for the CGP integral.
//!
//! At `N = 2` the Hilbert–Schmidt law of `λ = λ_1` has density `3(2λ-1)²` on
//! `[0, 1]`, so the CGP is a one-dimensional integral. Substituting
//! `λ = (1 - cos φ)/2` turns the `√λ` endpoint behaviour into an analytic
//! integrand on `[0, π]`:
//!
//! ```text
//! CGP = ∫_0^π 3 cos²φ · (sin φ / 2) · C_S(Φ(diag(λ, 1-λ))) dφ
//! ```
//!
//! `C_S` of the qubit output uses `√ρ = (ρ + √det ρ · I) / √(1 + 2√det ρ)`,
//! so no eigenvectors are involved.

use gauss_quad::GaussLegendre;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::DensityOperator;

/// Node count used when the caller has no preference.
pub const DEFAULT_QUADRATURE_POINTS: usize = 256;
const MIN_POINTS: usize = 64;

/// `C_S` of a qubit density operator from its entries alone.
pub fn qubit_coherence_closed_form(rho: &DensityOperator) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let det = (a * d - m[(0, 1)].norm_sqr()).max(0.0);
    let s = det.sqrt();
    let norm = 1.0 + 2.0 * s;
    Ok(1.0 - ((a + s).powi(2) + (d + s).powi(2)) / norm)
}

/// Gauss–Legendre evaluation of the qubit CGP integral with `n_points` nodes.
pub fn quadrature_cgp_n2(phi: &Channel, n_points: usize) -> Result<f64> {
    if phi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: phi.dim(),
        });
    }
    if n_points < MIN_POINTS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_POINTS} quadrature points, got {n_points}"
        )));
    }
    let rule = GaussLegendre::new(n_points).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut failure = None;
    let value = rule.integrate(0.0, std::f64::consts::PI, |angle| {
        let (s, c) = angle.sin_cos();
        let lambda = (0.5 * (1.0 - c)).clamp(0.0, 1.0);
        let weight = 3.0 * c * c * 0.5 * s;
        let input = DensityOperator::new_unchecked(crate::linalg::ComplexMatrix::from_real_diagonal(&[
            lambda,
            1.0 - lambda,
        ]));
        match phi.apply(&input).and_then(|out| qubit_coherence_closed_form(&out)) {
            Ok(cs) => weight * cs,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
