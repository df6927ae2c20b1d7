//! Reproducible random-matrix samplers: Ginibre matrices, Haar unitaries and
//! Hilbert–Schmidt distributed states and spectra.
//!
//! All samplers consume a fixed number of uniforms per call for a given
//! dimension (Gaussians come from Box–Muller, permutations from one uniform
//! per swap), so substreams stay aligned no matter which values are drawn.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{check_distribution, clamp_psd, hermitian_eig, qr, ComplexMatrix, DensityOperator};

/// Generator type behind every [`RngStream`].
pub type SampleRng = ChaCha8Rng;

/// A `(seed, stream_id)` pair naming one reproducible random stream.
///
/// Identical pairs always yield identical sequences. ChaCha's 64-bit stream
/// parameter gives independent streams under one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> SampleRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Child stream number `index`, derived only from `(stream_id, index)`.
    pub fn substream(&self, index: u64) -> RngStream {
        let mixed = splitmix64(splitmix64(self.stream_id) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
        RngStream {
            seed: self.seed,
            stream_id: mixed,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian (real and imaginary variance 1/2) from exactly two uniforms.
///
/// Uses `libm` for the transcendental functions so results do not depend on
/// the platform math library.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // u1 in (0, 1] keeps the log finite.
    let u1 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let radius = libm::sqrt(-libm::log(u1));
    let (s, c) = libm::sincos(2.0 * PI * u2);
    Complex64::new(radius * c, radius * s)
}

/// `n×n` Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn sample_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary via QR of a Ginibre matrix.
///
/// Column `j` of `Q` is multiplied by the phase of `R_jj`, which makes the
/// result independent of the QR routine's sign convention.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = sample_ginibre(n, rng);
    let (q, r) = qr(&g).expect("Ginibre matrix is square");
    let phases: Vec<Complex64> = (0..n)
        .map(|j| {
            let d = r[(j, j)];
            let m = d.norm();
            if m == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                d / m
            }
        })
        .collect();
    ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j])
}

/// Hilbert–Schmidt random density operator `G G^dag / Tr(G G^dag)`.
pub fn sample_hs_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    let g = sample_ginibre(n, rng);
    let w = &g * &g.dagger();
    let tr = w.trace().re;
    let rho = w.scale(Complex64::new(1.0 / tr, 0.0)).hermitian_part();
    DensityOperator::new_unchecked(rho)
}

/// Diagonal of an incoherent state, a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct IncoherentState {
    lambdas: Vec<f64>,
}

impl IncoherentState {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        check_distribution(&lambdas, 1e-12)?;
        Ok(Self { lambdas })
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn into_lambdas(self) -> Vec<f64> {
        self.lambdas
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::new_unchecked(ComplexMatrix::from_real_diagonal(&self.lambdas))
    }
}

/// Spectrum of a [`sample_hs_density`] draw, in uniformly random order.
///
/// The eigensolver returns sorted eigenvalues; the shuffle restores the
/// exchangeable joint law `∝ δ(1 - Σλ) Π_{i<j} (λ_i - λ_j)²`.
pub fn sample_incoherent_hs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> IncoherentState {
    let rho = sample_hs_density(n, rng);
    let mut lambdas = hermitian_eig(rho.matrix())
        .expect("sampled state is Hermitian")
        .eigenvalues;
    clamp_psd(&mut lambdas).expect("sampled state is positive semidefinite");
    let total: f64 = lambdas.iter().sum();
    for l in &mut lambdas {
        *l /= total;
    }
    shuffle(&mut lambdas, rng);
    IncoherentState { lambdas }
}

/// Fisher–Yates shuffle consuming exactly one uniform per swap.
fn shuffle<T, R: Rng + ?Sized>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        let u: f64 = rng.random();
        let j = ((u * (i + 1) as f64) as usize).min(i);
        v.swap(i, j);
    }
}

/// Normalization constant `C_N = Γ(N²) / (Γ(N+1) Π_{j=1}^N Γ(j)²)` of the
/// Hilbert–Schmidt eigenvalue law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsNormalization {
    pub ln_value: f64,
    /// `exp(ln_value)` when it fits in an `f64`.
    pub value: Option<f64>,
}

pub fn hs_normalization(n: usize) -> Result<HsNormalization> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let nf = n as f64;
    let ln_prod: f64 = (1..=n).map(|j| libm::lgamma(j as f64)).sum();
    let ln_value = libm::lgamma(nf * nf) - libm::lgamma(nf + 1.0) - 2.0 * ln_prod;
    let v = ln_value.exp();
    Ok(HsNormalization {
        ln_value,
        value: v.is_finite().then_some(v),
    })
}
