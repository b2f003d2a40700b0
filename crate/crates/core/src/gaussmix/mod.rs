//! Finite Gaussian mixtures `f = sum gamma_k exp(-(x - mu_k)^2 / (2 sigma_k^2))`
//! with weights of arbitrary sign.

use serde::{Deserialize, Serialize};

use crate::certify::Verdict;
use crate::error::{Error, Result};
use crate::gbf::{backward_scan, RootReport, Sample};
use crate::numeric::normal::INV_SQRT_2PI;

mod bounds;
pub mod hermite;
pub mod qtable;
mod sequence;

pub use bounds::bounding_interval;
pub use hermite::hermite_polys;
pub use qtable::{q_table_determinant, q_table_recursive, QTable};
pub use sequence::{data_scaling, gbf_sequence, gbf_sequence_on, GaussSequence, QPath};

/// One kernel `gamma exp(-(x - mu)^2 / (2 sigma2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub gamma: f64,
    pub mu: f64,
    pub sigma2: f64,
}

impl GaussianComponent {
    pub fn q(&self, x: f64) -> f64 {
        let d = x - self.mu;
        d * d / (2.0 * self.sigma2)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Mass of the kernel times its weight.
    pub fn mass(&self) -> f64 {
        self.gamma * self.sigma() / INV_SQRT_2PI
    }
}

/// Mixture in canonical order: descending variance, then ascending mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianMixture {
    components: Vec<GaussianComponent>,
}

impl GaussianMixture {
    /// Validates, merges kernels with identical `(mu, sigma2)`, drops zero
    /// weights and sorts into canonical order.
    pub fn new(components: Vec<GaussianComponent>) -> Result<Self> {
        let mut merged: Vec<GaussianComponent> = Vec::new();
        for c in components {
            if !(c.sigma2 > 0.0 && c.sigma2.is_finite()) {
                return Err(Error::InvalidInput(format!("variance must be positive and finite, got {}", c.sigma2)));
            }
            if !c.gamma.is_finite() || !c.mu.is_finite() {
                return Err(Error::InvalidInput("weights and means must be finite".into()));
            }
            match merged.iter_mut().find(|m| m.mu == c.mu && m.sigma2 == c.sigma2) {
                Some(m) => m.gamma += c.gamma,
                None => merged.push(c),
            }
        }
        merged.retain(|c| c.gamma != 0.0);
        if merged.is_empty() {
            return Err(Error::InvalidInput("mixture has no component with nonzero weight".into()));
        }
        merged.sort_by(|a, b| b.sigma2.total_cmp(&a.sigma2).then(a.mu.total_cmp(&b.mu)));
        Ok(GaussianMixture { components: merged })
    }

    /// From `(gamma, mu, sigma2)` triples.
    pub fn from_triples(t: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(t.iter().map(|&(gamma, mu, sigma2)| GaussianComponent { gamma, mu, sigma2 }).collect())
    }

    /// From weights of normalized densities `w N(mu, sigma2)`.
    pub fn from_densities(t: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            t.iter()
                .map(|&(w, mu, sigma2)| GaussianComponent { gamma: w * INV_SQRT_2PI / sigma2.sqrt(), mu, sigma2 })
                .collect(),
        )
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `f(x)` with a log-sum-exp factor, so far tails do not underflow.
    pub fn sample(&self, x: f64) -> Sample {
        let lf = self.components.iter().map(|c| -c.q(x)).fold(f64::NEG_INFINITY, f64::max);
        let (mut v, mut s) = (0.0, 0.0);
        for c in &self.components {
            let e = (-c.q(x) - lf).exp();
            v += c.gamma * e;
            s += c.gamma.abs() * e;
        }
        Sample { value: v, scale: s, log_factor: lf }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.gamma * (-c.q(x)).exp()).sum()
    }

    /// Distribution function of the signed measure `f dx`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.mass() * crate::numeric::normal::cdf((x - c.mu) / c.sigma()))
            .sum()
    }

    /// `integral of f = sum gamma_k sigma_k sqrt(2 pi)`.
    pub fn mass(&self) -> f64 {
        self.components.iter().map(GaussianComponent::mass).sum()
    }

    /// Multiplies every weight by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.components.iter().map(|c| GaussianComponent { gamma: c.gamma * k, ..*c }).collect())
    }

    /// Translates every mean by `t`.
    pub fn shifted(&self, t: f64) -> Result<Self> {
        Self::new(self.components.iter().map(|c| GaussianComponent { mu: c.mu + t, ..*c }).collect())
    }

    /// Component dominating at `+inf` (`positive`) or `-inf`.
    pub fn dominant(&self, positive: bool) -> &GaussianComponent {
        self.components
            .iter()
            .max_by(|a, b| {
                a.sigma2.total_cmp(&b.sigma2).then(if positive {
                    a.mu.total_cmp(&b.mu)
                } else {
                    b.mu.total_cmp(&a.mu)
                })
            })
            .expect("nonempty mixture")
    }
}

/// Sign-changing zeros on the bounding interval.
pub fn find_roots(mix: &GaussianMixture, eps: f64) -> Result<RootReport> {
    let seq = gbf_sequence(mix)?;
    let (a, b) = seq.interval;
    backward_scan(&seq.levels, a, b, eps)
}

/// Nonnegativity and unit-mass verdict.
pub fn certify_pdf(mix: &GaussianMixture, eps: f64) -> Result<Verdict> {
    let report = find_roots(mix, eps)?;
    Ok(Verdict::from_report(&report, Some(mix.mass())))
}
