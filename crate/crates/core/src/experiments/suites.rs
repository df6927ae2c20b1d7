//! Named verification suites with machine-readable reports.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    mc_cgp, mc_mean_cgp, mc_mean_normalized_cgp, quadrature_cgp_n2, typicality_experiment, verify_mixed_unitary_bound,
    McEstimate, DEFAULT_QUADRATURE_POINTS, SIGMA_BAND,
};
use crate::cgp;
use crate::channels::{self, Channel};
use crate::error::{Error, Result};
use crate::sampling::{sample_haar_unitary, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Constants,
    Oracles,
    Mean,
    Typicality,
    Mixed,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Constants,
        Suite::Oracles,
        Suite::Mean,
        Suite::Typicality,
        Suite::Mixed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Constants => "constants",
            Suite::Oracles => "oracles",
            Suite::Mean => "mean",
            Suite::Typicality => "typicality",
            Suite::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    fn close(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: (value - expected).abs() <= tolerance,
            value,
            expected,
            tolerance,
        }
    }

    fn statistical(name: impl Into<String>, est: &McEstimate, expected: f64) -> Self {
        Check {
            name: name.into(),
            passed: est.agrees_with(expected),
            value: est.mean,
            expected,
            tolerance: (SIGMA_BAND * est.std_error).max(super::ABS_FLOOR),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Constants => constants()?,
        Suite::Oracles => oracles(seed)?,
        Suite::Mean => mean(seed)?,
        Suite::Typicality => typicality(seed)?,
        Suite::Mixed => mixed(seed)?,
    };
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn constants() -> Result<Vec<Check>> {
    let f2 = 1.0 - 3.0 * PI / 16.0;
    let f4 = 1.0 - 54545.0 * PI / 262144.0;
    let mut checks = vec![
        Check::close("F_2", cgp::factor(2)?, f2, 1e-12),
        Check::close("F_3", cgp::factor(3)?, 1.0 - 103.0 * PI / 512.0, 1e-12),
        Check::close("F_4", cgp::factor(4)?, f4, 1e-12),
        Check::close(
            "cgp(hadamard)",
            cgp::cgp_unitary(&channels::hadamard_matrix())?,
            0.5 * f2,
            1e-12,
        ),
        Check::close(
            "cgp(sqrt_swap)",
            cgp::cgp_unitary(&channels::sqrt_swap_matrix())?,
            0.25 * f4,
            1e-12,
        ),
        Check::close("cgp_max(2)", cgp::cgp_max(2)?, 0.205, 5e-4),
        Check::close("cgp_max(3)", cgp::cgp_max(3)?, 0.245, 5e-4),
    ];
    let top = cgp::cgp_max(1024)?;
    checks.push(Check {
        name: "cgp_max(1024) in [0.27, 0.285]".into(),
        passed: (0.27..=0.285).contains(&top),
        value: top,
        expected: 0.28,
        tolerance: 0.01,
    });
    Ok(checks)
}

fn oracles(seed: u64) -> Result<Vec<Check>> {
    let pts = DEFAULT_QUADRATURE_POINTS;
    let mut checks = Vec::new();
    let named = [
        ("hadamard", channels::hadamard_matrix()),
        ("rotation(pi/8)", channels::rotation_matrix(PI / 8.0)),
    ];
    for (name, u) in named {
        let q = quadrature_cgp_n2(&Channel::Unitary(u.clone()), pts)?;
        checks.push(Check::close(
            format!("quadrature {name}"),
            q,
            cgp::cgp_unitary(&u)?,
            1e-8,
        ));
    }
    let mut rng = RngStream::new(seed, 0).rng();
    for i in 0..20 {
        let u = sample_haar_unitary(2, &mut rng);
        let q = quadrature_cgp_n2(&Channel::Unitary(u.clone()), pts)?;
        checks.push(Check::close(
            format!("quadrature haar #{i}"),
            q,
            cgp::cgp_unitary(&u)?,
            1e-8,
        ));
    }
    let est = mc_cgp(&channels::hadamard(), 100_000, RngStream::new(seed, 1))?;
    checks.push(Check::statistical(
        "monte carlo hadamard",
        &est,
        cgp::cgp_unitary(&channels::hadamard_matrix())?,
    ));
    Ok(checks)
}

fn mean(seed: u64) -> Result<Vec<Check>> {
    let mut checks = vec![Check::statistical(
        "E[cgp] N=2",
        &mc_mean_cgp(2, 1_000_000, RngStream::new(seed, 0))?,
        cgp::mean_cgp(2)?,
    )];
    for (i, n) in [2usize, 4, 8].into_iter().enumerate() {
        let est = mc_mean_normalized_cgp(n, 100_000, RngStream::new(seed, 1 + i as u64))?;
        checks.push(Check::statistical(
            format!("E[normalized cgp] N={n}"),
            &est,
            n as f64 / (n as f64 + 1.0),
        ));
    }
    Ok(checks)
}

fn typicality(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut previous = f64::INFINITY;
    let mut monotone = true;
    for (i, n) in [2usize, 4, 8, 16, 32, 64].into_iter().enumerate() {
        let r = typicality_experiment(n, 2000, RngStream::new(seed, i as u64))?;
        checks.push(Check {
            name: format!("Pr[normalized >= 1 - 2/N^(1/3)] N={n}"),
            passed: r.bound_holds,
            value: r.fraction_above_threshold,
            expected: r.lower_bound,
            tolerance: 0.0,
        });
        monotone &= r.variance < previous;
        previous = r.variance;
    }
    checks.push(Check {
        name: "variance decreases with N".into(),
        passed: monotone,
        value: previous,
        expected: 0.0,
        tolerance: 0.0,
    });
    Ok(checks)
}

/// Random convex combination of `terms` Haar unitaries in dimension `n`.
pub fn random_mixture(n: usize, terms: usize, stream: RngStream) -> Result<Channel> {
    use rand::Rng;
    let mut rng = stream.rng();
    let raw: Vec<f64> = (0..terms).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let unitaries = (0..terms).map(|_| sample_haar_unitary(n, &mut rng)).collect();
    Channel::mixed_unitary(weights, unitaries)
}

fn mixed(seed: u64) -> Result<Vec<Check>> {
    let samples = 10_000;
    let mut cases: Vec<(String, Channel)> = vec![
        ("depolarizing(0.2)".into(), channels::depolarizing(0.2)?),
        ("bit_flip(0.3)".into(), channels::bit_flip(0.3)?),
        ("phase_flip(0.3)".into(), channels::phase_flip(0.3)?),
        ("bit_phase_flip(0.3)".into(), channels::bit_phase_flip(0.3)?),
        (
            "hadamard/identity".into(),
            Channel::mixed_unitary(
                vec![0.5, 0.5],
                vec![channels::hadamard_matrix(), crate::ComplexMatrix::identity(2)],
            )?,
        ),
    ];
    for (i, n) in [2usize, 2, 4, 4].into_iter().enumerate() {
        cases.push((
            format!("random mixture N={n} #{i}"),
            random_mixture(n, 3, RngStream::new(seed, 100 + i as u64))?,
        ));
    }
    cases
        .into_iter()
        .enumerate()
        .map(|(i, (name, phi))| {
            let r = verify_mixed_unitary_bound(&phi, samples, RngStream::new(seed, i as u64))?;
            Ok(Check {
                name: format!("mixed bound {name}"),
                passed: r.holds,
                value: r.mc.mean,
                expected: r.bound,
                tolerance: SIGMA_BAND * r.mc.std_error,
            })
        })
        .collect()
}
