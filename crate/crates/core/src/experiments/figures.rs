use std::f64::consts::PI;
use std::io::Write;

use crate::cgp;
use crate::channels::{partial_swap_matrix, rotation_matrix};
use crate::error::{Error, Result};

/// Largest exponent accepted for the `CGP_N` curve; the coefficient table is `O(N³)`.
pub const MAX_FIG1_EXPONENT: u32 = 12;

/// Deterministic data series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Figure {
    /// `(N, CGP_N)` for `N = 2^m`, `m = 1..=max_exponent`.
    UpperBound { max_exponent: u32 },
    /// `(θ, CGP(U_θ))` on an even grid over `[0, π]`.
    Rotation { points: usize },
    /// `(t, CGP(U_t))` on an even grid over `[0, 1]`.
    PartialSwap { points: usize },
}

impl Figure {
    pub fn header(&self) -> [&'static str; 2] {
        match self {
            Figure::UpperBound { .. } => ["N", "cgp_max"],
            Figure::Rotation { .. } => ["theta", "cgp"],
            Figure::PartialSwap { .. } => ["t", "cgp"],
        }
    }
}

fn grid(points: usize, hi: f64) -> Result<impl Iterator<Item = f64>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    let step = (points - 1) as f64;
    Ok((0..points).map(move |i| hi * i as f64 / step))
}

pub fn figure_data(which: Figure) -> Result<Vec<(f64, f64)>> {
    match which {
        Figure::UpperBound { max_exponent } => {
            if !(1..=MAX_FIG1_EXPONENT).contains(&max_exponent) {
                return Err(Error::InvalidParameter(format!(
                    "exponent must lie in 1..={MAX_FIG1_EXPONENT}, got {max_exponent}"
                )));
            }
            (1..=max_exponent)
                .map(|m| {
                    let n = 1usize << m;
                    Ok((n as f64, cgp::cgp_max(n)?))
                })
                .collect()
        }
        Figure::Rotation { points } => grid(points, PI)?
            .map(|theta| Ok((theta, cgp::cgp_unitary(&rotation_matrix(theta))?)))
            .collect(),
        Figure::PartialSwap { points } => grid(points, 1.0)?
            .map(|t| Ok((t, cgp::cgp_unitary(&partial_swap_matrix(t)?)?)))
            .collect(),
    }
}

/// Header row then one row per point.
pub fn write_csv<W: Write>(which: Figure, rows: &[(f64, f64)], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(which.header())?;
    for (x, y) in rows {
        let x = match which {
            Figure::UpperBound { .. } => format!("{}", *x as u64),
            _ => format!("{x}"),
        };
        w.write_record([x, format!("{y}")])?;
    }
    w.flush()
}
