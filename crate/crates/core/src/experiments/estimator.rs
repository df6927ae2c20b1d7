//! Block-parallel Monte Carlo with a fixed stream layout.
//!
//! Samples are cut into blocks of [`BLOCK_SIZE`]; block `b` draws from
//! `stream.substream(b)`. Per-block statistics are reduced in block order, so
//! results are bit-identical for any thread count.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{RngStream, SampleRng};

/// Samples per substream.
pub const BLOCK_SIZE: usize = 1024;

/// Width of the agreement band, in standard errors.
pub const SIGMA_BAND: f64 = 3.0;
/// Smallest band accepted when comparing an estimate with an exact value.
pub const ABS_FLOOR: f64 = 1e-4;

/// Result of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_samples)`.
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub stream_id: u64,
    pub block_size: usize,
    pub min: f64,
    pub max: f64,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

impl McEstimate {
    /// `(mean - expected) / std_error`; infinite when the error is zero and the means differ.
    pub fn z_score(&self, expected: f64) -> f64 {
        let d = self.mean - expected;
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    /// `|mean - expected| <= max(3 σ, 1e-4)`.
    pub fn agrees_with(&self, expected: f64) -> bool {
        (self.mean - expected).abs() <= (SIGMA_BAND * self.std_error).max(ABS_FLOOR)
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Moments {
    const EMPTY: Moments = Moments {
        count: 0,
        mean: 0.0,
        m2: 0.0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };

    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    // Pairwise merge of two partial means and variances.
    fn merge(self, other: Moments) -> Moments {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }
}

fn block_ranges(n_samples: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    let n_blocks = n_samples.div_ceil(BLOCK_SIZE);
    (0..n_blocks).into_par_iter().map(move |b| {
        let len = BLOCK_SIZE.min(n_samples - b * BLOCK_SIZE);
        (b as u64, len)
    })
}

/// Mean and standard error of `f` over `n_samples` draws.
pub fn monte_carlo<F>(n_samples: usize, stream: RngStream, f: F) -> Result<McEstimate>
where
    F: Fn(&mut SampleRng) -> Result<f64> + Sync,
{
    if n_samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let start = Instant::now();
    let blocks: Vec<Moments> = block_ranges(n_samples)
        .map(|(b, len)| {
            let mut rng = stream.substream(b).rng();
            let mut m = Moments::EMPTY;
            for _ in 0..len {
                m.push(f(&mut rng)?);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let total = blocks.into_iter().fold(Moments::EMPTY, Moments::merge);
    let variance = total.m2 / (total.count - 1) as f64;
    let estimate = McEstimate {
        mean: total.mean,
        std_error: (variance.max(0.0) / total.count as f64).sqrt(),
        n_samples,
        seed: stream.seed,
        stream_id: stream.stream_id,
        block_size: BLOCK_SIZE,
        min: total.min,
        max: total.max,
        wall_time: start.elapsed().as_secs_f64(),
    };
    log::debug!(
        "monte carlo: {} samples, mean {:.6e} ± {:.2e} in {:.3}s",
        n_samples,
        estimate.mean,
        estimate.std_error,
        estimate.wall_time
    );
    Ok(estimate)
}

/// Every sample of `f`, in sample-index order, under the same stream layout
/// as [`monte_carlo`].
pub fn collect_samples<F>(n_samples: usize, stream: RngStream, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut SampleRng) -> Result<f64> + Sync,
{
    let blocks: Vec<Vec<f64>> = block_ranges(n_samples)
        .map(|(b, len)| {
            let mut rng = stream.substream(b).rng();
            (0..len).map(|_| f(&mut rng)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(blocks.concat())
}
