//! Coherence generating power (CGP) of quantum channels under the
//! skew-information coherence measure.
//!
//! The crate provides closed forms for unitary channels ([`cgp`]), Monte Carlo
//! estimators over Hilbert–Schmidt distributed incoherent states
//! ([`experiments`]), and the random-matrix samplers and dense linear algebra
//! they are built on.
//!
//! ```
//! use cgp_core::{cgp, channels};
//!
//! let h = channels::hadamard_matrix();
//! let value = cgp::cgp_unitary(&h).unwrap();
//! let expected = 0.5 * (1.0 - 3.0 * std::f64::consts::PI / 16.0);
//! assert!((value - expected).abs() < 1e-12);
//! ```

pub mod cgp;
pub mod channels;
pub mod coherence;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod sampling;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityOperator};
pub use num_complex::Complex64;
