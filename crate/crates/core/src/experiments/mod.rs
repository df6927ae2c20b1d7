//! Monte Carlo estimators and the checks tying them to the closed forms in
//! [`crate::cgp`].

mod estimator;
mod figures;
mod quadrature;
pub mod suites;

use serde::Serialize;

pub use estimator::{collect_samples, monte_carlo, McEstimate, ABS_FLOOR, BLOCK_SIZE, SIGMA_BAND};
pub use figures::{figure_data, write_csv, Figure};
pub use quadrature::{quadrature_cgp_n2, qubit_coherence_closed_form, DEFAULT_QUADRATURE_POINTS};

use crate::cgp;
use crate::channels::Channel;
use crate::coherence::{c_s, ConjugatedCoherence};
use crate::error::{Error, Result};
use crate::linalg::ensure_unitary;
use crate::sampling::{sample_haar_unitary, sample_incoherent_hs, RngStream};

/// Smallest sample count accepted by the Monte Carlo entry points.
pub const MIN_SAMPLES: usize = 100;

fn check_samples(n_samples: usize) -> Result<()> {
    if n_samples < MIN_SAMPLES {
        Err(Error::InvalidParameter(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )))
    } else {
        Ok(())
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidParameter(format!(
            "dimension must be at least 2, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Monte Carlo estimate of `∫ dμ(Λ) C_S(Φ(Λ))` over Hilbert–Schmidt
/// distributed incoherent states.
///
/// Unitary channels use the eigensolve-free `C_S(UΛU^dag)` formula; every
/// other channel is applied explicitly and its output diagonalized.
pub fn mc_cgp(phi: &Channel, n_samples: usize, stream: RngStream) -> Result<McEstimate> {
    check_samples(n_samples)?;
    let n = phi.dim();
    match phi {
        Channel::Unitary(u) => {
            ensure_unitary(u, cgp::UNITARY_TOL)?;
            let coherence = ConjugatedCoherence::new(u);
            monte_carlo(n_samples, stream, |rng| {
                let lambda = sample_incoherent_hs(n, rng);
                Ok(coherence.evaluate(lambda.lambdas()))
            })
        }
        _ => monte_carlo(n_samples, stream, |rng| {
            let lambda = sample_incoherent_hs(n, rng);
            c_s(&phi.apply(&lambda.to_density())?)
        }),
    }
}

/// Haar average of the closed-form `CGP(U)`.
pub fn mc_mean_cgp(n: usize, n_unitaries: usize, stream: RngStream) -> Result<McEstimate> {
    check_dim(n)?;
    check_samples(n_unitaries)?;
    cgp::coefficient_table(n)?;
    monte_carlo(n_unitaries, stream, |rng| {
        cgp::cgp_unitary_unchecked(&sample_haar_unitary(n, rng), n)
    })
}

/// Haar average of `CGP(U) / CGP_N`.
pub fn mc_mean_normalized_cgp(n: usize, n_unitaries: usize, stream: RngStream) -> Result<McEstimate> {
    check_dim(n)?;
    check_samples(n_unitaries)?;
    let max = cgp::cgp_max(n)?;
    monte_carlo(n_unitaries, stream, |rng| {
        Ok(cgp::cgp_unitary_unchecked(&sample_haar_unitary(n, rng), n)? / max)
    })
}

/// Haar average of `|U_11|⁴`; exactly `2/(N(N+1))`.
pub fn mc_haar_fourth_moment(n: usize, draws: usize, stream: RngStream) -> Result<McEstimate> {
    check_samples(draws)?;
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    monte_carlo(draws, stream, |rng| {
        let u = sample_haar_unitary(n, rng);
        Ok(u[(0, 0)].norm_sqr().powi(2))
    })
}

/// Empirical concentration of the normalized CGP.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypicalityReport {
    pub n: usize,
    pub n_unitaries: usize,
    /// `1 - 2 / N^{1/3}`.
    pub threshold: f64,
    /// Fraction of draws with normalized CGP at or above the threshold.
    pub fraction_above_threshold: f64,
    /// `1 - exp(-N^{1/3} / 256)`, the guaranteed minimum of that fraction.
    pub lower_bound: f64,
    pub bound_holds: bool,
    pub mean: f64,
    pub variance: f64,
}

pub fn typicality_experiment(n: usize, n_unitaries: usize, stream: RngStream) -> Result<TypicalityReport> {
    check_dim(n)?;
    check_samples(n_unitaries)?;
    let max = cgp::cgp_max(n)?;
    let values = collect_samples(n_unitaries, stream, |rng| {
        Ok(cgp::cgp_unitary_unchecked(&sample_haar_unitary(n, rng), n)? / max)
    })?;
    let cube_root = (n as f64).cbrt();
    let threshold = 1.0 - 2.0 / cube_root;
    let lower_bound = 1.0 - (-cube_root / 256.0).exp();
    let count = values.len() as f64;
    let fraction_above_threshold = values.iter().filter(|&&v| v >= threshold).count() as f64 / count;
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    Ok(TypicalityReport {
        n,
        n_unitaries,
        threshold,
        fraction_above_threshold,
        lower_bound,
        bound_holds: fraction_above_threshold >= lower_bound,
        mean,
        variance,
    })
}

/// Monte Carlo CGP of a mixed-unitary channel against `Σ_m p_m CGP(U_m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedBoundCheck {
    pub mc: McEstimate,
    pub bound: f64,
    /// `mc.mean - 3 σ <= bound`.
    pub holds: bool,
}

pub fn verify_mixed_unitary_bound(phi: &Channel, n_samples: usize, stream: RngStream) -> Result<MixedBoundCheck> {
    let bound = cgp::mixed_unitary_bound(phi)?;
    let mc = mc_cgp(phi, n_samples, stream)?;
    let holds = mc.mean - SIGMA_BAND * mc.std_error <= bound;
    Ok(MixedBoundCheck { mc, bound, holds })
}
