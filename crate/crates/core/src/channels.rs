//! Channel representations and the named gates and qubit channels.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_distribution, ensure_unitary, unitary_deviation, ComplexMatrix, DensityOperator};

/// Unitarity tolerance for channel construction.
pub const UNITARY_TOL: f64 = 1e-10;
/// Trace-preservation tolerance for Kraus channels.
pub const KRAUS_TOL: f64 = 1e-9;
/// Tolerance on mixture weights summing to one.
pub const WEIGHT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A quantum channel.
///
/// Build through [`Channel::unitary`], [`Channel::kraus`] or
/// [`Channel::mixed_unitary`], which enforce the variant invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub enum Channel {
    Unitary(ComplexMatrix),
    Kraus(Vec<ComplexMatrix>),
    MixedUnitary {
        weights: Vec<f64>,
        unitaries: Vec<ComplexMatrix>,
    },
}

impl Channel {
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        u.square_dim()?;
        ensure_unitary(&u, UNITARY_TOL)?;
        Ok(Channel::Unitary(u))
    }

    /// Kraus channel; requires `Σ K^dag K = I` within [`KRAUS_TOL`].
    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidParameter("no Kraus operators".into()))?;
        let n = first.square_dim()?;
        let mut completeness = ComplexMatrix::zeros(n, n);
        for k in &ops {
            let d = k.square_dim()?;
            if d != n {
                return Err(Error::DimensionMismatch { expected: n, found: d });
            }
            completeness = &completeness + &(&k.dagger() * k);
        }
        let deviation = completeness.max_abs_diff(&ComplexMatrix::identity(n));
        if deviation > KRAUS_TOL {
            return Err(Error::NotTracePreserving {
                deviation,
                tolerance: KRAUS_TOL,
            });
        }
        Ok(Channel::Kraus(ops))
    }

    /// Convex combination `Σ_m p_m U_m · U_m^dag`.
    pub fn mixed_unitary(weights: Vec<f64>, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if weights.len() != unitaries.len() {
            return Err(Error::DimensionMismatch {
                expected: unitaries.len(),
                found: weights.len(),
            });
        }
        check_distribution(&weights, WEIGHT_TOL)?;
        let n = unitaries[0].square_dim()?;
        for u in &unitaries {
            let d = u.square_dim()?;
            if d != n {
                return Err(Error::DimensionMismatch { expected: n, found: d });
            }
            ensure_unitary(u, UNITARY_TOL)?;
        }
        Ok(Channel::MixedUnitary { weights, unitaries })
    }

    /// Hilbert-space dimension the channel acts on.
    pub fn dim(&self) -> usize {
        match self {
            Channel::Unitary(u) => u.rows(),
            Channel::Kraus(ops) => ops[0].rows(),
            Channel::MixedUnitary { unitaries, .. } => unitaries[0].rows(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Channel::Unitary(_) => "unitary",
            Channel::Kraus(_) => "kraus",
            Channel::MixedUnitary { .. } => "mixed_unitary",
        }
    }

    /// `Φ(ρ)`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let n = self.dim();
        if rho.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.dim(),
            });
        }
        let r = rho.matrix();
        let out = match self {
            Channel::Unitary(u) => u.conjugate(r),
            Channel::Kraus(ops) => ops
                .iter()
                .map(|k| k.conjugate(r))
                .reduce(|a, b| &a + &b)
                .expect("nonempty Kraus list"),
            Channel::MixedUnitary { weights, unitaries } => weights
                .iter()
                .zip(unitaries)
                .map(|(&p, u)| u.conjugate(r).scale(re(p)))
                .reduce(|a, b| &a + &b)
                .expect("nonempty mixture"),
        };
        Ok(DensityOperator::new_unchecked(out.hermitian_part()))
    }
}

/// JSON wire form of a channel.
#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    #[serde(rename = "type")]
    kind: String,
    matrices: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
}

impl TryFrom<ChannelRepr> for Channel {
    type Error = Error;

    fn try_from(r: ChannelRepr) -> Result<Self> {
        match r.kind.as_str() {
            "unitary" => {
                let mut m = r.matrices;
                if m.len() != 1 {
                    return Err(Error::InvalidParameter(format!(
                        "unitary channel needs exactly one matrix, got {}",
                        m.len()
                    )));
                }
                Channel::unitary(m.remove(0))
            }
            "kraus" => Channel::kraus(r.matrices),
            "mixed_unitary" => {
                let weights = r
                    .weights
                    .ok_or_else(|| Error::InvalidParameter("mixed_unitary channel needs weights".into()))?;
                Channel::mixed_unitary(weights, r.matrices)
            }
            other => Err(Error::InvalidParameter(format!("unknown channel type {other:?}"))),
        }
    }
}

impl From<Channel> for ChannelRepr {
    fn from(c: Channel) -> Self {
        let kind = c.kind().to_string();
        match c {
            Channel::Unitary(u) => ChannelRepr {
                kind,
                matrices: vec![u],
                weights: None,
            },
            Channel::Kraus(ops) => ChannelRepr {
                kind,
                matrices: ops,
                weights: None,
            },
            Channel::MixedUnitary { weights, unitaries } => ChannelRepr {
                kind,
                matrices: unitaries,
                weights: Some(weights),
            },
        }
    }
}

pub fn hadamard_matrix() -> ComplexMatrix {
    let h = re(FRAC_1_SQRT_2);
    ComplexMatrix::from_rows(&[[h, h], [h, -h]]).expect("static shape")
}

/// `[[cos θ, sin θ], [-sin θ, cos θ]]`.
pub fn rotation_matrix(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_rows(&[[re(c), re(s)], [re(-s), re(c)]]).expect("static shape")
}

/// Square root of the two-qubit swap gate.
pub fn sqrt_swap_matrix() -> ComplexMatrix {
    let a = Complex64::new(0.5, 0.5);
    let b = Complex64::new(0.5, -0.5);
    ComplexMatrix::from_rows(&[
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, a, b, ZERO],
        [ZERO, b, a, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ])
    .expect("static shape")
}

/// Partial swap `√t I⊗I + i√(1-t) S` on two qubits, `t ∈ [0, 1]`.
pub fn partial_swap_matrix(t: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "partial swap parameter {t} outside [0, 1]"
        )));
    }
    let a = re(t.sqrt());
    let b = I * (1.0 - t).sqrt();
    let d = a + b;
    Ok(ComplexMatrix::from_rows(&[
        [d, ZERO, ZERO, ZERO],
        [ZERO, a, b, ZERO],
        [ZERO, b, a, ZERO],
        [ZERO, ZERO, ZERO, d],
    ])
    .expect("static shape"))
}

/// Fourier matrix `<s|U|t> = exp(2πi st/n)/√n` with `s, t = 1..n`.
pub fn fourier_matrix(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "Fourier dimension must be at least 2, got {n}"
        )));
    }
    let amp = 1.0 / (n as f64).sqrt();
    Ok(ComplexMatrix::from_fn(n, n, |s, t| {
        // Reduce the exponent mod n before scaling to keep the phase exact-ish for large n.
        let k = ((s + 1) * (t + 1)) % n;
        Complex64::from_polar(amp, 2.0 * PI * k as f64 / n as f64)
    }))
}

/// Pauli matrix `σ_m`, with `σ_0 = I`.
pub fn pauli_matrix(m: usize) -> ComplexMatrix {
    let rows = match m {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("Pauli index {m} out of range"),
    };
    ComplexMatrix::from_rows(&rows).expect("static shape")
}

pub fn identity(n: usize) -> Result<Channel> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    Ok(Channel::Unitary(ComplexMatrix::identity(n)))
}

pub fn hadamard() -> Channel {
    Channel::Unitary(hadamard_matrix())
}

pub fn rotation(theta: f64) -> Result<Channel> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("rotation angle {theta} is not finite")));
    }
    Ok(Channel::Unitary(rotation_matrix(theta)))
}

pub fn sqrt_swap() -> Channel {
    Channel::Unitary(sqrt_swap_matrix())
}

pub fn partial_swap(t: f64) -> Result<Channel> {
    partial_swap_matrix(t).map(Channel::Unitary)
}

pub fn fourier(n: usize) -> Result<Channel> {
    fourier_matrix(n).map(Channel::Unitary)
}

/// Pauli channel `ρ ↦ Σ_m p_m σ_m ρ σ_m`, stored as a mixed-unitary channel.
pub fn pauli_channel(p: [f64; 4]) -> Result<Channel> {
    Channel::mixed_unitary(p.to_vec(), (0..4).map(pauli_matrix).collect())
}

/// `p_1 = p_2 = p_3 = p`.
pub fn depolarizing(p: f64) -> Result<Channel> {
    pauli_channel([1.0 - 3.0 * p, p, p, p])
}

pub fn bit_flip(p: f64) -> Result<Channel> {
    pauli_channel([1.0 - p, p, 0.0, 0.0])
}

pub fn bit_phase_flip(p: f64) -> Result<Channel> {
    pauli_channel([1.0 - p, 0.0, p, 0.0])
}

pub fn phase_flip(p: f64) -> Result<Channel> {
    pauli_channel([1.0 - p, 0.0, 0.0, p])
}

/// Qubit amplitude damping with `E_1 = diag(1, √(1-γ))`.
///
/// The unital variant uses `E_2 = diag(0, √γ)`. The nonunital one uses
/// `E_2 = √γ |0><1|`, which decays `|1>` into `|0>` and sends
/// `diag(λ_1, λ_2)` to `diag(λ_1 + γλ_2, (1-γ)λ_2)`. (`√γ |1><0|` would not
/// be trace preserving together with this `E_1`.)
pub fn amplitude_damping(gamma: f64, unital: bool) -> Result<Channel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("damping rate {gamma} outside [0, 1]")));
    }
    let e1 = ComplexMatrix::from_real_diagonal(&[1.0, (1.0 - gamma).sqrt()]);
    let g = re(gamma.sqrt());
    let e2 = if unital {
        ComplexMatrix::from_rows(&[[ZERO, ZERO], [ZERO, g]])
    } else {
        ComplexMatrix::from_rows(&[[ZERO, g], [ZERO, ZERO]])
    }
    .expect("static shape");
    Channel::kraus(vec![e1, e2])
}

/// Largest deviation from unitarity among the channel's unitaries, if any.
pub fn max_unitary_deviation(phi: &Channel) -> Option<f64> {
    match phi {
        Channel::Unitary(u) => Some(unitary_deviation(u)),
        Channel::MixedUnitary { unitaries, .. } => Some(unitaries.iter().map(unitary_deviation).fold(0.0, f64::max)),
        Channel::Kraus(_) => None,
    }
}
