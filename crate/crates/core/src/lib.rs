//! Sign-changing zeros of finite mixtures with coefficients of arbitrary sign.
//!
//! Three families are covered: Gaussian mixtures, polynomial-Gaussian
//! mixtures and EPT functions `c exp(Ax) b`. For each family a generalized
//! Budan-Fourier sequence `psi_0 = f, ..., psi_n = 0` is built together with
//! the pivots linking consecutive levels, and a backward scan turns the
//! sequence into the sign-changing zeros of `f`. On top of that sit PDF
//! certification and Wasserstein-1 distances computed from the zeros of CDF
//! differences.
//!
//! ```
//! use gbfkit::gaussmix::{GaussianMixture, find_roots};
//!
//! let mix = GaussianMixture::from_triples(&[(1.0, 0.0, 1.0), (-1.0, 2.0, 1.0)]).unwrap();
//! let report = find_roots(&mix, gbfkit::DEFAULT_EPS).unwrap();
//! assert_eq!(report.roots.len(), 1);
//! assert!((report.roots[0].x - 1.0).abs() < 1e-12);
//! ```

pub mod bench;
pub mod ept;
pub mod error;
pub mod certify;
pub mod gaussmix;
pub mod gbf;
pub mod io;
pub mod numeric;
pub mod pgm;
pub mod plot;
pub mod wasserstein;

pub use error::{Error, Result};

/// Default refinement accuracy.
pub const DEFAULT_EPS: f64 = 2.2204e-16;
