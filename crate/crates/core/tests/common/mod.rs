//! Independent oracles and random instance generators shared by the
//! integration tests.

#![allow(dead_code)]

use rand::Rng;

use gbfkit::ept::EptRealization;
use gbfkit::gaussmix::hermite::hermite_polys_scaled;
use gbfkit::gaussmix::{data_scaling, GaussianMixture};
use gbfkit::numeric::{poly_determinant, Matrix, PolyMatrix, Polynomial};
use gbfkit::pgm::{PgmSum, PgmTerm};

/// Midpoints of the cells of a uniform grid on `[a, b]` where `sign`
/// changes, skipping zero signs. Returns `(midpoint, cell width)` pairs.
pub fn dense_sign_changes(sign: impl Fn(f64) -> f64, a: f64, b: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((b - a) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for i in 0..=n {
        let x = (a + i as f64 * step).min(b);
        let s = sign(x);
        if s == 0.0 || s.is_nan() {
            continue;
        }
        if let Some((xp, sp)) = last {
            if sp != s {
                out.push((0.5 * (xp + x), x - xp));
            }
        }
        last = Some((x, s));
    }
    out
}

/// True when `got` and the oracle changes correspond one to one, each root
/// within the oracle cell (widened by `slack`).
pub fn matches_oracle(got: &[f64], oracle: &[(f64, f64)], slack: f64) -> bool {
    got.len() == oracle.len()
        && got.iter().zip(oracle).all(|(g, (m, w))| (g - m).abs() <= 0.5 * w + slack)
}

/// Sign of `sum_k gamma_k exp(-(x - mu_k)^2 / (2 sigma2_k))` computed in the
/// log domain, straight from the component triples.
pub fn gauss_sign(comps: &[(f64, f64, f64)], x: f64) -> f64 {
    let e: Vec<f64> = comps.iter().map(|&(_, mu, s2)| -(x - mu) * (x - mu) / (2.0 * s2)).collect();
    let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut v, mut s) = (0.0, 0.0);
    for (&(g, _, _), &ei) in comps.iter().zip(&e) {
        let t = g * (ei - m).exp();
        v += t;
        s += t.abs();
    }
    if v.abs() <= 1e-13 * s {
        0.0
    } else {
        v.signum()
    }
}

/// Sign of a PGM sum in the log domain, from raw `(p, q)` data.
pub fn pgm_sign(terms: &[(Vec<f64>, [f64; 3])], x: f64) -> f64 {
    let e: Vec<f64> = terms.iter().map(|(_, q)| q[0] + q[1] * x + q[2] * x * x).collect();
    let m = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut v, mut s) = (0.0, 0.0);
    for ((p, _), &ei) in terms.iter().zip(&e) {
        let pv: f64 = p.iter().rev().fold(0.0, |acc, &c| acc * x + c);
        let w = (ei - m).exp();
        v += pv * w;
        s += p.iter().map(|c| c.abs()).sum::<f64>() * x.abs().max(1.0).powi(p.len() as i32) * w;
    }
    if v.abs() <= 1e-13 * s {
        0.0
    } else {
        v.signum()
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Integral over `[a, b]` split into `pieces` equal parts, each adaptive.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces).map(|i| adaptive_simpson(&f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / pieces as f64)).sum()
}

/// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier recursion,
/// ascending coefficients.
pub fn faddeev_leverrier(a: &Matrix) -> Vec<f64> {
    let n = a.nrows();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + Matrix::identity(n, n) * c[n - k + 1];
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Mixture triples `(gamma, mu, sigma2)` in the timing-experiment ranges.
pub fn random_gauss_triples(rng: &mut impl Rng, n: usize) -> Vec<(f64, f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-10.0..10.0), rng.gen_range(0.1..1.0)))
        .collect()
}

/// Valid mixture of densities: positive weights summing to one.
pub fn random_density_triples(rng: &mut impl Rng, n: usize) -> Vec<(f64, f64, f64)> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let tot: f64 = w.iter().sum();
    w.iter().map(|wi| (wi / tot, rng.gen_range(-3.0..3.0), rng.gen_range(0.2..2.0))).collect()
}

/// Raw PGM data with distinct quadratic exponents.
pub fn random_pgm_data(rng: &mut impl Rng, n: usize) -> Vec<(Vec<f64>, [f64; 3])> {
    (0..n)
        .map(|_| {
            let deg = rng.gen_range(0..=2);
            let mut p: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if p[deg].abs() < 0.1 {
                p[deg] = 0.5;
            }
            let s2: f64 = rng.gen_range(0.3..1.5);
            let mu: f64 = rng.gen_range(-2.0..2.0);
            (p, [-mu * mu / (2.0 * s2), mu / s2, -1.0 / (2.0 * s2)])
        })
        .collect()
}

pub fn pgm_from_data(data: &[(Vec<f64>, [f64; 3])]) -> PgmSum {
    PgmSum::new(data.iter().map(|(p, q)| PgmTerm::new(Polynomial::new(p.clone()), *q).unwrap()).collect()).unwrap()
}

/// Stable realization: upper-triangular `A` with distinct negative diagonal
/// plus one rotation block when `n >= 3`.
pub fn random_stable_ept(rng: &mut impl Rng, n: usize) -> EptRealization {
    let mut a = Matrix::zeros(n, n);
    let mut i = 0;
    if n >= 3 && rng.gen_bool(0.5) {
        let (th, om) = (rng.gen_range(-1.5..-0.2), rng.gen_range(0.5..3.0));
        a[(0, 0)] = th;
        a[(1, 1)] = th;
        a[(0, 1)] = om;
        a[(1, 0)] = -om;
        i = 2;
    }
    while i < n {
        a[(i, i)] = -(0.2 + 0.6 * i as f64 + rng.gen_range(0.0..0.5));
        i += 1;
    }
    for r in 0..n {
        for c in r + 1..n {
            if a[(r, c)] == 0.0 && !(r == 0 && c == 1 && a[(1, 0)] != 0.0) {
                a[(r, c)] = rng.gen_range(-0.5..0.5);
            }
        }
    }
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|k| a[(r, k)]).collect()).collect();
    EptRealization::from_rows(&rows, &b, &c).unwrap()
}

/// Valid EPT density: mixture of exponentials with positive weights.
pub fn random_exp_mixture(rng: &mut impl Rng, n: usize) -> EptRealization {
    let rates: Vec<f64> = (0..n).map(|i| 0.3 + i as f64 + rng.gen_range(0.0..0.8)).collect();
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let tot: f64 = w.iter().sum();
    let rows: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|k| if r == k { -rates[r] } else { 0.0 }).collect()).collect();
    let b = vec![1.0; n];
    let c: Vec<f64> = w.iter().zip(&rates).map(|(wi, l)| wi / tot * l).collect();
    EptRealization::from_rows(&rows, &b, &c).unwrap()
}

/// `c exp(Ax) b` by a truncated Taylor series with scaling and squaring,
/// independent of the library's Pade evaluation.
pub fn ept_value_taylor(r: &EptRealization, x: f64) -> f64 {
    let n = r.a.nrows();
    let norm = r.a.abs().max() * x.abs() * n as f64;
    let k = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let s = &r.a * (x / 2f64.powi(k));
    let mut e = Matrix::identity(n, n);
    let mut term = Matrix::identity(n, n);
    for j in 1..30 {
        term = &term * &s / j as f64;
        e += &term;
    }
    for _ in 0..k {
        e = &e * &e;
    }
    (r.c.transpose() * e * &r.b)[(0, 0)]
}

/// Largest relative error of the defining identity over `points` random
/// points per level of `levels` on `[a, b]`, with central step `h`.
pub fn identity_worst(levels: &[gbfkit::gbf::GbfLevel], a: f64, b: f64, points: usize, h: f64, seed: u64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..levels.len() {
        let up = levels.get(i + 1);
        for x in gbfkit::gbf::identity_sample_points(&levels[i], up, a, b, points, 1e-3 * (b - a).max(1.0), seed + i as u64) {
            worst = worst.max(gbfkit::gbf::check_identity(&levels[i], up, x, h).relative_error());
        }
    }
    worst
}

/// CDF of a density-weighted Gaussian mixture via `erfc`.
pub fn gauss_mixture_cdf(t: &[(f64, f64, f64)], x: f64) -> f64 {
    t.iter().map(|&(w, mu, s2)| w * 0.5 * libm::erfc(-(x - mu) / (2.0 * s2).sqrt())).sum()
}

/// `integral |F - G|` for density-weighted Gaussian mixtures by adaptive
/// quadrature on a window wide enough that the tails are below 1e-15.
pub fn w1_gauss_oracle(t1: &[(f64, f64, f64)], t2: &[(f64, f64, f64)]) -> f64 {
    let reach = t1.iter().chain(t2).map(|&(_, mu, s2)| mu.abs() + 12.0 * s2.sqrt()).fold(0.0, f64::max);
    quad(|x| (gauss_mixture_cdf(t1, x) - gauss_mixture_cdf(t2, x)).abs(), -reach, reach, 400, 1e-12)
}

/// Survival function of an exponential mixture realized with diagonal `A`
/// and `b = 1`, read back from the realization.
pub fn exp_mixture_survival(r: &EptRealization, x: f64) -> f64 {
    (0..r.order()).map(|i| {
        let l = -r.a[(i, i)];
        r.c[i] / l * (-l * x).exp()
    }).sum()
}

/// `integral_0^inf |S_1 - S_2|` for diagonal exponential mixtures.
pub fn w1_exp_oracle(r1: &EptRealization, r2: &EptRealization) -> f64 {
    let slow = (0..r1.order()).map(|i| -r1.a[(i, i)]).chain((0..r2.order()).map(|i| -r2.a[(i, i)])).fold(f64::INFINITY, f64::min);
    let end = 40.0 / slow;
    quad(|x| (exp_mixture_survival(r1, x) - exp_mixture_survival(r2, x)).abs(), 0.0, end, 400, 1e-12)
}

/// Oracle sign changes on `[a, b]`: step 1e-4 over the span of the
/// components, coarser (relative to the interval) outside it.
pub fn gauss_oracle_roots(t: &[(f64, f64, f64)], a: f64, b: f64) -> Vec<(f64, f64)> {
    let lo = t.iter().map(|c| c.1 - 6.0 * c.2.sqrt()).fold(f64::INFINITY, f64::min).max(a);
    let hi = t.iter().map(|c| c.1 + 6.0 * c.2.sqrt()).fold(f64::NEG_INFINITY, f64::max).min(b);
    let coarse = ((b - a) * 1e-6).max(1e-4);
    let sign = |x: f64| gauss_sign(t, x);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut push = |v: Vec<(f64, f64)>| pts.extend(v);
    if a < lo {
        push(dense_sign_changes(sign, a, lo, coarse));
    }
    push(dense_sign_changes(sign, lo.max(a), hi.min(b), 1e-4));
    if hi < b {
        push(dense_sign_changes(sign, hi, b, coarse));
    }
    // Sign changes that straddle the seams between the scans.
    let all = dense_sign_changes(sign, a, b, (b - a) / 4e5);
    if all.len() > pts.len() {
        return all;
    }
    pts
}

/// Largest relative coefficient of the polynomial parts of
/// `W(h_1..h_n, h_k)`, whose weighted sum is the polynomial part of `W(h_1..h_n, f)`.
pub fn annihilation_residual(t: &[(f64, f64, f64)]) -> f64 {
    let mix = GaussianMixture::from_triples(t).unwrap();
    let (c, s) = data_scaling(&mix);
    let n = t.len();
    // Hermite rows in the scaled variable, one column per component plus f.
    let cols: Vec<Vec<Polynomial>> = t
        .iter()
        .map(|&(_, mu, s2)| hermite_polys_scaled(mu, s2, n, c, s))
        .collect();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        // W(h_1..h_n, f) = sum_k gamma_k e^{...} det(P with column k repeated).
        let m: PolyMatrix = (0..=n).map(|r| (0..n).chain([k]).map(|j| cols[j][r].clone()).collect()).collect();
        let scale: f64 = m.iter().map(|row| row.iter().map(|p| p.l1_norm()).sum::<f64>()).product();
        let d = poly_determinant(&m).unwrap();
        worst = worst.max(d.max_norm() / scale);
    }
    worst
}

/// `|c p(A) exp(Ax) b|` and its scale, with `p` from Faddeev-LeVerrier and
/// the exponential from the Taylor oracle.
pub fn ept_annihilation_ratio(r: &EptRealization, x: f64) -> f64 {
    let p = faddeev_leverrier(&r.a);
    let n = r.order();
    let e = taylor_exp(&(&r.a * x));
    let (mut pa, mut pa_abs) = (Matrix::zeros(n, n), Matrix::zeros(n, n));
    let (mut pow, mut pow_abs) = (Matrix::identity(n, n), Matrix::identity(n, n));
    for c in &p {
        pa += &pow * *c;
        pa_abs += &pow_abs * c.abs();
        pow = &pow * &r.a;
        pow_abs = &pow_abs * r.a.abs();
    }
    let v = (r.c.transpose() * pa * &e * &r.b)[(0, 0)];
    let s = (r.c.abs().transpose() * pa_abs * e.abs() * r.b.abs())[(0, 0)];
    v.abs() / s
}

pub fn taylor_exp(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let k = (m.abs().max() * n as f64 / 0.5).log2().ceil().max(0.0) as i32;
    let s = m / 2f64.powi(k);
    let (mut e, mut term) = (Matrix::identity(n, n), Matrix::identity(n, n));
    for j in 1..30 {
        term = &term * &s / j as f64;
        e += &term;
    }
    for _ in 0..k {
        e = &e * &e;
    }
    e
}
