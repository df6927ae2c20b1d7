//! Inline `name:param` specs for gates and channels.

use cgp_core::channels::{self, Channel};
use cgp_core::{ComplexMatrix, Error, Result};

pub const GATES: &str = "hadamard, rotation:THETA, sqrt_swap, partial_swap:T, fourier:N, identity:N";
pub const NOISE: &str = "pauli:P0,P1,P2,P3, depolarizing:P, bit_flip:P, phase_flip:P, bit_phase_flip:P, \
                         amplitude_damping:GAMMA, amplitude_damping_unital:GAMMA";

fn split(spec: &str) -> (&str, Option<&str>) {
    match spec.split_once(':') {
        Some((name, param)) => (name.trim(), Some(param.trim())),
        None => (spec.trim(), None),
    }
}

fn param<T: std::str::FromStr>(name: &str, raw: Option<&str>) -> Result<T> {
    let raw =
        raw.ok_or_else(|| Error::InvalidParameter(format!("`{name}` needs a parameter, as in `{name}:VALUE`")))?;
    raw.parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse `{raw}` as the parameter of `{name}`")))
}

fn no_param(name: &str, raw: Option<&str>) -> Result<()> {
    match raw {
        None => Ok(()),
        Some(_) => Err(Error::InvalidParameter(format!("`{name}` takes no parameter"))),
    }
}

/// Matrix of a named unitary gate.
pub fn gate(spec: &str) -> Result<ComplexMatrix> {
    let (name, raw) = split(spec);
    match name {
        "hadamard" => no_param(name, raw).map(|_| channels::hadamard_matrix()),
        "sqrt_swap" => no_param(name, raw).map(|_| channels::sqrt_swap_matrix()),
        "rotation" => {
            let theta: f64 = param(name, raw)?;
            if !theta.is_finite() {
                return Err(Error::InvalidParameter(format!("rotation angle {theta} is not finite")));
            }
            Ok(channels::rotation_matrix(theta))
        }
        "partial_swap" => channels::partial_swap_matrix(param(name, raw)?),
        "fourier" => channels::fourier_matrix(param(name, raw)?),
        "identity" => {
            let n: usize = param(name, raw)?;
            if n == 0 {
                return Err(Error::InvalidParameter("identity dimension must be positive".into()));
            }
            Ok(ComplexMatrix::identity(n))
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown gate `{name}`; expected one of: {GATES}"
        ))),
    }
}

/// A named gate or noise channel.
pub fn channel(spec: &str) -> Result<Channel> {
    let (name, raw) = split(spec);
    match name {
        "pauli" => {
            let raw = raw.ok_or_else(|| Error::InvalidParameter("`pauli` needs four probabilities".into()))?;
            let p: Vec<f64> = raw
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse `{raw}` as four probabilities")))?;
            let p: [f64; 4] = p
                .try_into()
                .map_err(|_| Error::InvalidParameter("`pauli` needs exactly four probabilities".into()))?;
            channels::pauli_channel(p)
        }
        "depolarizing" => channels::depolarizing(param(name, raw)?),
        "bit_flip" => channels::bit_flip(param(name, raw)?),
        "phase_flip" => channels::phase_flip(param(name, raw)?),
        "bit_phase_flip" => channels::bit_phase_flip(param(name, raw)?),
        "amplitude_damping" => channels::amplitude_damping(param(name, raw)?, false),
        "amplitude_damping_unital" => channels::amplitude_damping(param(name, raw)?, true),
        _ => match gate(spec) {
            Ok(u) => Channel::unitary(u),
            Err(Error::InvalidParameter(msg)) if msg.starts_with("unknown gate") => Err(Error::InvalidParameter(
                format!("unknown channel `{name}`; expected a gate ({GATES}) or a noise channel ({NOISE})"),
            )),
            Err(e) => Err(e),
        },
    }
}
