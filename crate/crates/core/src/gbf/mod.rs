//! Generalized Budan-Fourier sequences and the backward scan.
//!
//! A sequence `psi_0 = f, psi_1, ..., psi_n = 0` with pivots `rho_k`
//! satisfies `D(psi_{k-1} / rho_k) = psi_k / rho_k`. Between consecutive
//! zeros and poles of `psi_k` and `rho_k`, the quotient `psi_{k-1} / rho_k` is
//! monotone, so those points form a simple grid for `psi_{k-1}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::numeric::sign_threshold;

mod identity;
mod refine;
mod scan;

pub use identity::{check_identity, identity_sample_points, IdentityCheck};
pub use refine::{refine_root, refine_sample};
pub use scan::{backward_scan, backward_scan_detailed, roots_from_grid, LevelScan, Scan};

/// Evaluation of a level: the true value is `value * exp(log_factor)`.
///
/// `scale` is a magnitude for `value` (typically the sum of the absolute
/// values of the terms), used to decide when `value` is indistinguishable
/// from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub scale: f64,
    pub log_factor: f64,
}

impl Sample {
    pub fn plain(value: f64, scale: f64) -> Self {
        Sample { value, scale, log_factor: 0.0 }
    }

    pub fn real(&self) -> f64 {
        self.value * self.log_factor.exp()
    }

    /// `value` rescaled to the reference factor `exp(reference)`.
    pub fn relative_to(&self, reference: f64) -> f64 {
        self.value * (self.log_factor - reference).min(700.0).exp()
    }

    pub fn is_negligible(&self) -> bool {
        !(self.value.abs() > sign_threshold() * self.scale)
    }

    /// -1, 0 or 1, with 0 for values below the sign threshold.
    pub fn sign(&self) -> i8 {
        if self.is_negligible() {
            0
        } else if self.value > 0.0 {
            1
        } else {
            -1
        }
    }
}

pub type Evaluator = Arc<dyn Fn(f64) -> Sample + Send + Sync>;

/// One level `psi_i` of a sequence.
///
/// `pivot` is `rho_{i+1}`, the pivot linking this level to the next one;
/// `pivot_zeros` and `pivot_poles` are its real zeros and poles in the scan
/// interval. `poles` are the poles of `psi_i` itself. When present, `gauge`
/// is a factor `g` with `D(psi_i / rho_{i+1}) = psi_{i+1} / (rho_{i+1} g)`.
#[derive(Clone)]
pub struct GbfLevel {
    pub label: String,
    pub eval: Evaluator,
    pub pivot: Option<Evaluator>,
    pub gauge: Option<Evaluator>,
    pub pivot_zeros: Vec<f64>,
    pub pivot_poles: Vec<f64>,
    pub poles: Vec<f64>,
}

impl fmt::Debug for GbfLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GbfLevel")
            .field("label", &self.label)
            .field("pivot_zeros", &self.pivot_zeros)
            .field("pivot_poles", &self.pivot_poles)
            .field("poles", &self.poles)
            .finish()
    }
}

impl GbfLevel {
    pub fn new(label: impl Into<String>, eval: Evaluator) -> Self {
        GbfLevel {
            label: label.into(),
            eval,
            pivot: None,
            gauge: None,
            pivot_zeros: Vec::new(),
            pivot_poles: Vec::new(),
            poles: Vec::new(),
        }
    }

    pub fn eval(&self, x: f64) -> Sample {
        (self.eval)(x)
    }

    /// Keeps only points inside `[a, b]`, sorted and deduplicated.
    pub fn clip(mut self, a: f64, b: f64) -> Self {
        for set in [&mut self.pivot_zeros, &mut self.pivot_poles, &mut self.poles] {
            set.retain(|x| *x >= a && *x <= b);
            set.sort_by(f64::total_cmp);
            set.dedup();
        }
        self
    }
}

/// Ordered interior points of `[a, b]` partitioning it into simple intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGrid {
    pub a: f64,
    pub b: f64,
    pub points: Vec<f64>,
}

impl SimpleGrid {
    /// Sorts, drops points outside `(a, b)` and merges points closer than
    /// the sign threshold relative to `b - a`.
    pub fn new(a: f64, b: f64, mut points: Vec<f64>) -> Self {
        assert!(a < b, "empty interval");
        points.retain(|x| x.is_finite() && *x > a && *x < b);
        points.sort_by(f64::total_cmp);
        let tol = sign_threshold() * (b - a);
        let mut merged: Vec<f64> = Vec::with_capacity(points.len());
        for x in points {
            match merged.last() {
                Some(&y) if x - y <= tol => {
                    log::debug!("grid points {y} and {x} merged");
                }
                _ => merged.push(x),
            }
        }
        SimpleGrid { a, b, points: merged }
    }

    /// `a, points..., b`
    pub fn nodes(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.points.len() + 2);
        v.push(self.a);
        v.extend_from_slice(&self.points);
        v.push(self.b);
        v
    }
}

/// A refined sign-changing zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub x: f64,
    pub bracket: [f64; 2],
    pub tol: f64,
}

/// A grid-side probe whose value fell below the sign threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearZeroEvent {
    pub x: f64,
    pub value: f64,
    pub scale: f64,
}

/// Sign-changing zeros of a function on a bounded interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub interval: [f64; 2],
    pub roots: Vec<Root>,
    /// Sign on each piece of the partition induced by the roots, as `+`/`-`.
    pub sign_pattern: String,
    #[serde(default)]
    pub near_zero_grid_events: Vec<NearZeroEvent>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl RootReport {
    pub fn xs(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.x).collect()
    }

    /// Signs as integers, one per piece.
    pub fn signs(&self) -> Vec<i8> {
        self.sign_pattern
            .chars()
            .map(|c| match c {
                '+' => 1,
                '-' => -1,
                _ => 0,
            })
            .collect()
    }
}
