//! Closed-form coherence generating power of unitary channels.
//!
//! For a unitary `U` on `C^N`,
//!
//! ```text
//! CGP(U) = F_N · (1 - (1/N) Σ_{k,i} |U_ki|⁴),     F_N = 1 - B_N / (N²(N-1)),
//! B_N    = (Σ_k I_kk)² - Σ_{k,l} I_kl²,
//! I_kl   = Σ_{r=0}^{min(k,l)} (-1)^{k+l} C(1/2, k-r) C(1/2, l-r) Γ(3/2+r)/r!,
//! ```
//!
//! with `k, l = 0..N-1`. Only the zero-based range reproduces the known
//! constants `F_2 = 1 - 3π/16`, `F_3 = 1 - 103π/512`, `F_4 = 1 - 54545π/262144`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::{ensure_unitary, ComplexMatrix};

/// Unitarity tolerance accepted by the closed forms.
pub const UNITARY_TOL: f64 = 1e-10;

/// Generalized binomial coefficient `C(1/2, m)` by its product formula.
pub fn half_binomial(m: u32) -> f64 {
    let mut c = 1.0;
    for j in 0..m {
        c *= (0.5 - j as f64) / (j as f64 + 1.0);
    }
    c
}

/// Compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, x: f64) {
        // Knuth's branch-free two-sum; same error term as Neumaier's update.
        let t = self.sum + x;
        let v = t - self.sum;
        self.carry += (self.sum - (t - v)) + (x - v);
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// `Σ_r a[r] b[len-1-r]` with four interleaved compensated accumulators.
fn compensated_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [CompensatedSum::default(); 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.rchunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for j in 0..4 {
            acc[j].add(x[j] * y[3 - j]);
        }
    }
    for (x, y) in ca.remainder().iter().zip(cb.remainder().iter().rev()) {
        acc[0].add(x * y);
    }
    let mut total = CompensatedSum::default();
    for part in acc {
        total.add(part.sum);
        total.add(part.carry);
    }
    total.value()
}

/// The `I_kl` table together with the bracket `B_N` and factor `F_N`.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    n: usize,
    table: Vec<f64>,
    bracket: f64,
    factor: f64,
}

impl CoefficientTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `I_kl` with zero-based `k, l`.
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.table[k * self.n + l]
    }

    /// Row-major `N×N` values.
    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// `B_N = (Σ_k I_kk)² - Σ_{k,l} I_kl²`.
    pub fn bracket(&self) -> f64 {
        self.bracket
    }

    /// `F_N = 1 - B_N / (N²(N-1))`.
    pub fn factor(&self) -> f64 {
        self.factor
    }

    fn compute(n: usize) -> Self {
        // C(1/2, m) and Γ(3/2 + r)/r!, the latter by the ratio recurrence so
        // neither Γ nor r! ever overflows.
        let hb: Vec<f64> = {
            let mut v = Vec::with_capacity(n);
            let mut c = 1.0;
            for m in 0..n {
                v.push(c);
                c *= (0.5 - m as f64) / (m as f64 + 1.0);
            }
            v
        };
        let gr: Vec<f64> = {
            let mut v = Vec::with_capacity(n);
            let mut g = std::f64::consts::PI.sqrt() / 2.0;
            for r in 0..n {
                v.push(g);
                g *= (r as f64 + 1.5) / (r as f64 + 1.0);
            }
            v
        };

        let mut table = vec![0.0; n * n];
        let mut a = Vec::with_capacity(n);
        for k in 0..n {
            // a[r] = C(1/2, k-r) Γ(3/2+r)/r!, so the r-sum is a dot product
            // with hb[l-k..=l] read backwards.
            a.clear();
            a.extend((0..=k).map(|r| hb[k - r] * gr[r]));
            for l in k..n {
                let window = &hb[l - k..=l];
                let sum = compensated_dot(&a, window);
                let v = if (k + l) % 2 == 0 { sum } else { -sum };
                table[k * n + l] = v;
                table[l * n + k] = v;
            }
        }

        let mut trace = CompensatedSum::default();
        let mut squares = CompensatedSum::default();
        for k in 0..n {
            trace.add(table[k * n + k]);
            for l in 0..n {
                let v = table[k * n + l];
                squares.add(v * v);
            }
        }
        let tr = trace.value();
        let bracket = tr * tr - squares.value();
        let nf = n as f64;
        let factor = 1.0 - bracket / (nf * nf * (nf - 1.0));
        Self {
            n,
            table,
            bracket,
            factor,
        }
    }
}

fn table_cache() -> &'static RwLock<HashMap<usize, Arc<CoefficientTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<CoefficientTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
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

/// Coefficient table for dimension `n ≥ 2`, computed once per `n` and cached.
pub fn coefficient_table(n: usize) -> Result<Arc<CoefficientTable>> {
    check_dim(n)?;
    if let Some(t) = table_cache().read().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(t));
    }
    // Computed outside the lock; a concurrent duplicate computation is harmless.
    let fresh = Arc::new(CoefficientTable::compute(n));
    let mut w = table_cache().write().expect("cache poisoned");
    Ok(Arc::clone(w.entry(n).or_insert(fresh)))
}

/// `F_N`.
pub fn factor(n: usize) -> Result<f64> {
    Ok(coefficient_table(n)?.factor())
}

/// `Σ_{k,i} |U_ki|⁴`, between 1 and `N` for unitary `U`.
pub fn purity_sum(u: &ComplexMatrix) -> Result<f64> {
    u.square_dim()?;
    ensure_unitary(u, UNITARY_TOL)?;
    Ok(purity_sum_unchecked(u))
}

fn purity_sum_unchecked(u: &ComplexMatrix) -> f64 {
    u.as_slice().iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum()
}

/// CGP of the unitary channel `ρ ↦ U ρ U^dag`.
pub fn cgp_unitary(u: &ComplexMatrix) -> Result<f64> {
    let n = u.square_dim()?;
    ensure_unitary(u, UNITARY_TOL)?;
    cgp_unitary_unchecked(u, n)
}

/// [`cgp_unitary`] with a caller-chosen unitarity tolerance.
pub fn cgp_unitary_with_tolerance(u: &ComplexMatrix, tol: f64) -> Result<f64> {
    let n = u.square_dim()?;
    ensure_unitary(u, tol)?;
    cgp_unitary_unchecked(u, n)
}

pub(crate) fn cgp_unitary_unchecked(u: &ComplexMatrix, n: usize) -> Result<f64> {
    if n == 1 {
        return Ok(0.0);
    }
    let f = factor(n)?;
    // Rows of a unitary up to the accepted tolerance may push the sum a hair past N.
    Ok(f * (1.0 - purity_sum_unchecked(u) / n as f64).max(0.0))
}

/// Upper bound `CGP_N = (1 - 1/N) F_N`, attained iff every `|U_ki|² = 1/N`.
pub fn cgp_max(n: usize) -> Result<f64> {
    Ok((1.0 - 1.0 / n as f64) * factor(n)?)
}

/// Haar average `E_U[CGP(U)] = (N-1)/(N+1) · F_N`.
pub fn mean_cgp(n: usize) -> Result<f64> {
    let nf = n as f64;
    Ok((nf - 1.0) / (nf + 1.0) * factor(n)?)
}

/// `CGP(U) / CGP_N`, in `[0, 1]`.
pub fn normalized_cgp(u: &ComplexMatrix) -> Result<f64> {
    let n = u.square_dim()?;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "normalized CGP needs dimension at least 2".into(),
        ));
    }
    Ok(cgp_unitary(u)? / cgp_max(n)?)
}

/// `Σ_m p_m CGP(U_m)`, an upper bound on the CGP of a mixed-unitary channel.
pub fn mixed_unitary_bound(phi: &Channel) -> Result<f64> {
    match phi {
        Channel::MixedUnitary { weights, unitaries } => weights
            .iter()
            .zip(unitaries)
            .map(|(p, u)| Ok(p * cgp_unitary(u)?))
            .sum(),
        _ => Err(Error::WrongChannelVariant {
            expected: "mixed_unitary",
        }),
    }
}
