//! Timing experiment on random Gaussian mixtures.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gaussmix::{gbf_sequence, GaussianMixture};
use crate::gbf::backward_scan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub nsim: usize,
    pub mean_range: (f64, f64),
    pub var_range: (f64, f64),
    pub coef_range: (f64, f64),
    pub eps: f64,
    pub seed: u64,
    /// Worker threads; `None` uses all logical cores.
    pub jobs: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_min: 2,
            n_max: 8,
            nsim: 100,
            mean_range: (-10.0, 10.0),
            var_range: (0.1, 1.0),
            coef_range: (-1.0, 1.0),
            eps: crate::DEFAULT_EPS,
            seed: 0,
            jobs: None,
        }
    }
}

/// One simulated mixture and its timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub n: usize,
    pub index: usize,
    /// `(gamma, mu, sigma2)`
    pub components: Vec<(f64, f64, f64)>,
    pub interval: [f64; 2],
    pub roots: Vec<f64>,
    pub construct_secs: f64,
    pub scan_secs: f64,
    pub error: Option<String>,
}

impl SimRecord {
    pub fn total_secs(&self) -> f64 {
        self.construct_secs + self.scan_secs
    }
}

/// Columns of the timing table, plus the failure count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub nsim: usize,
    pub min: f64,
    pub median: f64,
    pub average: f64,
    pub max: f64,
    /// Percentage of the total time spent building sequences.
    pub pct_gbf: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub sims: Vec<SimRecord>,
}

pub fn random_mixture(n: usize, cfg: &BenchConfig, rng: &mut impl Rng) -> Vec<(f64, f64, f64)> {
    (0..n)
        .map(|_| {
            let g = rng.gen_range(cfg.coef_range.0..cfg.coef_range.1);
            let m = rng.gen_range(cfg.mean_range.0..cfg.mean_range.1);
            let v = rng.gen_range(cfg.var_range.0..cfg.var_range.1);
            (g, m, v)
        })
        .collect()
}

fn simulate(n: usize, index: usize, cfg: &BenchConfig) -> SimRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 32) ^ index as u64);
    let components = random_mixture(n, cfg, &mut rng);
    let mut rec = SimRecord {
        n,
        index,
        components: components.clone(),
        interval: [0.0, 0.0],
        roots: Vec::new(),
        construct_secs: 0.0,
        scan_secs: 0.0,
        error: None,
    };
    let mix = match GaussianMixture::from_triples(&components) {
        Ok(m) => m,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let t0 = Instant::now();
    let seq = gbf_sequence(&mix);
    let t1 = Instant::now();
    rec.construct_secs = (t1 - t0).as_secs_f64();
    let seq = match seq {
        Ok(s) => s,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let (a, b) = seq.interval;
    rec.interval = [a, b];
    let report = backward_scan(&seq.levels, a, b, cfg.eps);
    rec.scan_secs = t1.elapsed().as_secs_f64();
    match report {
        Ok(r) => rec.roots = r.xs(),
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

/// Runs `nsim` simulations for every `n` in `n_min..=n_max` on a worker pool.
pub fn run_bench(cfg: &BenchConfig) -> BenchResult {
    let jobs: Vec<(usize, usize)> =
        (cfg.n_min..=cfg.n_max).flat_map(|n| (0..cfg.nsim).map(move |i| (n, i))).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().expect("thread pool");
    let sims: Vec<SimRecord> = pool.install(|| jobs.par_iter().map(|&(n, i)| simulate(n, i, cfg)).collect());
    let rows = (cfg.n_min..=cfg.n_max)
        .map(|n| {
            let group: Vec<&SimRecord> = sims.iter().filter(|s| s.n == n).collect();
            let mut t: Vec<f64> = group.iter().map(|s| s.total_secs()).collect();
            t.sort_by(f64::total_cmp);
            let total: f64 = t.iter().sum();
            let construct: f64 = group.iter().map(|s| s.construct_secs).sum();
            BenchRow {
                n,
                nsim: group.len(),
                min: t.first().copied().unwrap_or(f64::NAN),
                median: median(&t),
                average: total / t.len().max(1) as f64,
                max: t.last().copied().unwrap_or(f64::NAN),
                pct_gbf: if total > 0.0 { 100.0 * construct / total } else { 0.0 },
                failures: group.iter().filter(|s| s.error.is_some()).count(),
            }
        })
        .collect();
    BenchResult { rows, sims }
}

pub const CSV_HEADER: &str = "n,nsim,min,median,average,max,pct_gbf,failures";

pub fn rows_csv(rows: &[BenchRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        s += &format!("{},{},{:?},{:?},{:?},{:?},{:?},{}\n", r.n, r.nsim, r.min, r.median, r.average, r.max, r.pct_gbf, r.failures);
    }
    s
}

/// Least-squares fit of `a exp(b n) + c exp(d n)` to the average times.
///
/// For each `(b, d)` on a grid with `b < d` the weights `(a, c)` solve a
/// 2x2 normal system; the pair with the smallest residual is returned.
pub fn fit_two_exponentials(ns: &[f64], ts: &[f64]) -> Option<[f64; 4]> {
    if ns.len() < 4 || ns.len() != ts.len() {
        return None;
    }
    let grid: Vec<f64> = (1..=300).map(|i| i as f64 * 0.01).collect();
    let mut best: Option<(f64, [f64; 4])> = None;
    for (ib, &b) in grid.iter().enumerate() {
        for &d in &grid[ib + 1..] {
            let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for (&n, &t) in ns.iter().zip(ts) {
                let (u, v) = ((b * n).exp(), (d * n).exp());
                s11 += u * u;
                s12 += u * v;
                s22 += v * v;
                r1 += u * t;
                r2 += v * t;
            }
            let det = s11 * s22 - s12 * s12;
            if det.abs() <= 1e-12 * s11 * s22 {
                continue;
            }
            let a = (r1 * s22 - r2 * s12) / det;
            let c = (s11 * r2 - s12 * r1) / det;
            let sse: f64 = ns.iter().zip(ts).map(|(&n, &t)| (a * (b * n).exp() + c * (d * n).exp() - t).powi(2)).sum();
            if best.map_or(true, |(e, _)| sse < e) {
                best = Some((sse, [a, b, c, d]));
            }
        }
    }
    best.map(|(_, p)| p)
}
