use std::sync::Arc;

use super::qtable::{q_table_determinant_scaled, q_table_recursive_scaled, QTable};
use super::{bounding_interval, GaussianMixture};
use crate::error::Result;
use crate::gbf::{GbfLevel, Sample};
use crate::numeric::{isolate_real_roots, Polynomial};

/// How the Q-polynomials are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QPath {
    #[default]
    Determinant,
    Recursion,
}

/// A sequence together with the interval it was built for.
#[derive(Debug, Clone)]
pub struct GaussSequence {
    pub levels: Vec<GbfLevel>,
    pub interval: (f64, f64),
    pub table: QTable,
}

/// Sequence on the bounding interval, Q-polynomials from determinants.
pub fn gbf_sequence(mix: &GaussianMixture) -> Result<GaussSequence> {
    let (a, b) = bounding_interval(mix);
    gbf_sequence_on(mix, a, b, QPath::Determinant)
}

/// Center and half-width of the range spanned by the components: the
/// midpoint of the extreme means, and half their spread plus the largest
/// standard deviation.
pub fn data_scaling(mix: &GaussianMixture) -> (f64, f64) {
    let comps = mix.components();
    let lo = comps.iter().map(|c| c.mu).fold(f64::INFINITY, f64::min);
    let hi = comps.iter().map(|c| c.mu).fold(f64::NEG_INFINITY, f64::max);
    let sd = comps.iter().map(|c| c.sigma()).fold(0.0, f64::max);
    (0.5 * (lo + hi), 0.5 * (hi - lo) + sd)
}

/// Levels `psi_j = sum_{k>j} gamma_k (Q^j_{1..j,k} / Q^{j-1}_{1..j}) h_k`
/// with pivots `rho_{j+1} = h_{j+1} Q^j_{1..j+1} / Q^{j-1}_{1..j}`.
///
/// Polynomials live in `t = (x - c) / s` with `(c, s)` from [`data_scaling`].
pub fn gbf_sequence_on(mix: &GaussianMixture, a: f64, b: f64, path: QPath) -> Result<GaussSequence> {
    let (c, s) = data_scaling(mix);
    let (ta, tb) = ((a - c) / s, (b - c) / s);
    let table = match path {
        QPath::Determinant => q_table_determinant_scaled(mix, c, s)?,
        QPath::Recursion => q_table_recursive_scaled(mix, c, s)?,
    };
    let comps = mix.components().to_vec();
    let n = comps.len();
    let to_x = |roots: Vec<f64>| -> Vec<f64> { roots.into_iter().map(|t| c + s * t).collect() };
    let real_roots = |p: &Polynomial| -> Vec<f64> {
        if p.degree() == 0 {
            Vec::new()
        } else {
            to_x(isolate_real_roots(p, ta, tb).into_iter().map(|r| r.x).collect())
        }
    };

    let mut levels = Vec::with_capacity(n);
    for j in 0..n {
        let den = table.diagonal(j);
        let next_diag = table.get(j, j + 1).clone();
        let nums: Vec<(f64, f64, f64, Polynomial)> = (j + 1..=n)
            .map(|k| {
                let cp = comps[k - 1];
                (cp.gamma, cp.mu, cp.sigma2, table.get(j, k).clone())
            })
            .collect();

        let eval: Arc<dyn Fn(f64) -> Sample + Send + Sync> = if j == 0 {
            let m = mix.clone();
            Arc::new(move |x| m.sample(x))
        } else {
            let den = den.clone();
            Arc::new(move |x| {
                let t = (x - c) / s;
                let d = den.eval(t);
                let lf = nums
                    .iter()
                    .map(|&(_, mu, s2, _)| -(x - mu) * (x - mu) / (2.0 * s2))
                    .fold(f64::NEG_INFINITY, f64::max);
                let (mut v, mut sc) = (0.0, 0.0);
                for (g, mu, s2, p) in &nums {
                    let e = (-(x - mu) * (x - mu) / (2.0 * s2) - lf).exp();
                    let (pv, ps) = p.eval_with_scale(t);
                    v += g * pv * e;
                    sc += g.abs() * ps * e;
                }
                Sample { value: v / d, scale: sc / d.abs(), log_factor: lf }
            })
        };

        let pivot_comp = comps[j];
        let (pden, pnum) = (den.clone(), next_diag.clone());
        let pivot: Arc<dyn Fn(f64) -> Sample + Send + Sync> = Arc::new(move |x| {
            let t = (x - c) / s;
            let v = pnum.eval(t) / pden.eval(t);
            Sample { value: v, scale: v.abs(), log_factor: -pivot_comp.q(x) }
        });

        let den_roots = real_roots(&den);
        let mut level = GbfLevel::new(format!("psi_{j}"), eval);
        level.pivot = Some(pivot);
        level.pivot_zeros = real_roots(&next_diag);
        level.pivot_poles = den_roots.clone();
        level.poles = den_roots;
        levels.push(level.clip(a, b));
    }
    Ok(GaussSequence { levels, interval: (a, b), table })
}
