//! Polynomial-Gaussian mixtures `f = sum p_j(x) exp(q_j(x))` with concave quadratic `q_j`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certify::Verdict;
use crate::error::{Error, Result};
use crate::gbf::{backward_scan, GbfLevel, RootReport, Sample};
use crate::numeric::{isolate_real_roots, poly_determinant, sign_threshold, Matrix, PolyMatrix, Polynomial, RationalFunction};

mod bounds;
mod iterative;

pub use bounds::bounding_interval;
pub use iterative::gbf_sequence_iterative;

/// `p(x) exp(q0 + q1 x + q2 x^2)` with `q2 < 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgmTerm {
    pub p: Polynomial,
    /// `[q0, q1, q2]`
    pub q: [f64; 3],
}

impl PgmTerm {
    pub fn new(p: Polynomial, q: [f64; 3]) -> Result<Self> {
        if !(q[2] < 0.0) || q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("exponent must be a finite concave quadratic, got q = {q:?}")));
        }
        if p.is_zero() {
            return Err(Error::InvalidInput("term polynomial is identically zero".into()));
        }
        Ok(PgmTerm { p, q })
    }

    /// Term `w p(x) exp(-(x - mu)^2 / (2 sigma2))`.
    pub fn gaussian(p: Polynomial, mu: f64, sigma2: f64) -> Result<Self> {
        PgmTerm::new(p, [-mu * mu / (2.0 * sigma2), mu / sigma2, -1.0 / (2.0 * sigma2)])
    }

    pub fn exponent(&self, x: f64) -> f64 {
        self.q[0] + x * (self.q[1] + x * self.q[2])
    }

    /// `q'` as a polynomial.
    pub fn exponent_derivative(&self) -> Polynomial {
        Polynomial::linear(self.q[1], 2.0 * self.q[2])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.p.eval(x) * self.exponent(x).exp()
    }

    /// `p_k` with `D^k (h exp(-r)) = p_k exp(q - r)`, for `k = 0..=n`, in `t`
    /// with `x = c + s t`; `dr` is `r'`.
    pub(crate) fn derivative_chain(&self, n: usize, c: f64, s: f64, dr: &Polynomial) -> Vec<Polynomial> {
        let dq = (&self.exponent_derivative() - dr).compose_affine(c, s);
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.p.compose_affine(c, s));
        for k in 0..n {
            let p = &out[k];
            let next = &p.derivative().scale(1.0 / s) + &(&dq * p);
            out.push(next);
        }
        out
    }

    fn scaled(&self, k: f64) -> PgmTerm {
        PgmTerm { p: self.p.scale(k), q: self.q }
    }

    /// `h(-x)`
    pub(crate) fn reflect(&self) -> PgmTerm {
        PgmTerm { p: self.p.reflect(), q: [self.q[0], -self.q[1], self.q[2]] }
    }
}

/// Sum of terms in canonical order: fastest decay first (most negative `q2`),
/// then ascending `q1`, then ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PgmSum {
    terms: Vec<PgmTerm>,
}

impl PgmSum {
    /// Merges terms with equal `(q2, q1)` and sorts into canonical order.
    pub fn new(terms: Vec<PgmTerm>) -> Result<Self> {
        let mut merged: Vec<PgmTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|m| m.q[2] == t.q[2] && m.q[1] == t.q[1]) {
                Some(m) => {
                    let q0 = m.q[0].max(t.q[0]);
                    let p = &m.p.scale((m.q[0] - q0).exp()) + &t.p.scale((t.q[0] - q0).exp());
                    *m = PgmTerm { p, q: [q0, m.q[1], m.q[2]] };
                }
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.p.is_zero());
        if merged.is_empty() {
            return Err(Error::InvalidInput("sum has no nonzero term".into()));
        }
        merged.sort_by(|a, b| {
            a.q[2]
                .total_cmp(&b.q[2])
                .then(a.q[1].total_cmp(&b.q[1]))
                .then(a.p.degree().cmp(&b.p.degree()))
        });
        Ok(PgmSum { terms: merged })
    }

    pub fn terms(&self) -> &[PgmTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn sample(&self, x: f64) -> Sample {
        let lf = self.terms.iter().map(|t| t.exponent(x)).fold(f64::NEG_INFINITY, f64::max);
        let (mut v, mut s) = (0.0, 0.0);
        for t in &self.terms {
            let e = (t.exponent(x) - lf).exp();
            let (pv, ps) = t.p.eval_with_scale(x);
            v += pv * e;
            s += ps * e;
        }
        Sample { value: v, scale: s, log_factor: lf }
    }
}

/// Polynomial part of the Wronskian of the given terms, in `t = (x - c) / s`.
///
/// The polynomial part is unchanged when every term is multiplied by a common
/// `exp(-r)`; taking `r` as the mean exponent keeps the derivative rows small.
pub(crate) fn wronskian_poly_scaled(terms: &[&PgmTerm], c: f64, s: f64) -> Result<Polynomial> {
    poly_determinant(&wronskian_matrix(terms, c, s))
}

fn wronskian_matrix(terms: &[&PgmTerm], c: f64, s: f64) -> PolyMatrix {
    let m = terms.len();
    let mean = terms.iter().fold(Polynomial::zero(), |acc, t| &acc + &t.exponent_derivative()).scale(1.0 / m as f64);
    let chains: Vec<Vec<Polynomial>> = terms.iter().map(|t| t.derivative_chain(m - 1, c, s, &mean)).collect();
    (0..m).map(|k| chains.iter().map(|ch| ch[k].clone()).collect()).collect()
}

/// The same polynomial part in `x`, evaluated as a scalar determinant at each point.
///
/// The interpolated coefficients carry an absolute error set by the largest
/// value on the interval, which swamps the Wronskian where it is small.
#[derive(Debug, Clone)]
struct PointWronskian(PolyMatrix);

impl PointWronskian {
    fn new(terms: &[&PgmTerm]) -> Self {
        PointWronskian(wronskian_matrix(terms, 0.0, 1.0))
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.0.len();
        if n == 0 {
            return 1.0;
        }
        Matrix::from_fn(n, n, |i, j| self.0[i][j].eval(x)).lu().determinant()
    }
}

/// `P_m`, the polynomial part of `W(h_1, ..., h_m)`.
pub fn wronskian_poly(terms: &[PgmTerm], m: usize) -> Result<Polynomial> {
    assert!(m >= 1 && m <= terms.len(), "order out of range");
    let refs: Vec<&PgmTerm> = terms[..m].iter().collect();
    let p = wronskian_poly_scaled(&refs, 0.0, 1.0)?;
    let scale = refs.iter().map(|t| t.p.max_norm()).product::<f64>();
    if p.max_norm() <= sign_threshold() * scale {
        return Err(Error::LinearlyDependentTerms { order: m });
    }
    Ok(p)
}

/// A sequence with the interval it was built on and its rational parts.
#[derive(Debug, Clone)]
pub struct PgmSequence {
    pub levels: Vec<GbfLevel>,
    pub interval: (f64, f64),
    pub center: f64,
    pub width: f64,
    /// `rationals[m][j - m - 1]` is the rational part of term `j > m` at level `m`, in `t`.
    pub rationals: Vec<Vec<RationalFunction>>,
}

impl PgmSequence {
    /// Numerator of the rational factor of term `j` (1-based, `j > m`) at level `m`, in `x`.
    pub fn numerator_in_x(&self, m: usize, j: usize) -> Polynomial {
        self.rationals[m][j - m - 1].num.compose_affine(-self.center / self.width, 1.0 / self.width)
    }

    pub fn denominator_in_x(&self, m: usize, j: usize) -> Polynomial {
        self.rationals[m][j - m - 1].den.compose_affine(-self.center / self.width, 1.0 / self.width)
    }
}

pub(crate) fn real_roots_x(p: &Polynomial, c: f64, s: f64) -> Vec<f64> {
    if p.degree() == 0 {
        return Vec::new();
    }
    isolate_real_roots(p, -1.0, 1.0).into_iter().map(|r| c + s * r.x).collect()
}

/// Level evaluator for `sum_j (num_j(t) / den(t)) exp(q_j(x))`.
pub(crate) fn rational_level(
    terms: Vec<(Polynomial, Polynomial, PgmTerm)>,
    c: f64,
    s: f64,
) -> Arc<dyn Fn(f64) -> Sample + Send + Sync> {
    Arc::new(move |x| {
        let t = (x - c) / s;
        let lf = terms.iter().map(|(_, _, h)| h.exponent(x)).fold(f64::NEG_INFINITY, f64::max);
        let (mut v, mut sc) = (0.0, 0.0);
        for (num, den, h) in &terms {
            let e = (h.exponent(x) - lf).exp();
            let d = den.eval(t);
            let (nv, ns) = num.eval_with_scale(t);
            v += nv / d * e;
            sc += ns / d.abs() * e;
        }
        Sample { value: v, scale: sc, log_factor: lf }
    })
}

/// Level evaluator for `sum_j (W_j(x) / W(x)) exp(q_j(x))`.
fn wronskian_level(terms: Vec<(PointWronskian, PgmTerm)>, den: PointWronskian) -> Arc<dyn Fn(f64) -> Sample + Send + Sync> {
    Arc::new(move |x| {
        let lf = terms.iter().map(|(_, h)| h.exponent(x)).fold(f64::NEG_INFINITY, f64::max);
        let d = den.eval(x);
        let (mut v, mut sc) = (0.0, 0.0);
        for (num, h) in &terms {
            let u = num.eval(x) / d * (h.exponent(x) - lf).exp();
            v += u;
            sc += u.abs();
        }
        Sample { value: v, scale: sc, log_factor: lf }
    })
}

/// Wronskian sequence on the bounding interval.
pub fn gbf_sequence_wronskian(s: &PgmSum) -> Result<PgmSequence> {
    let (a, b) = bounding_interval(s)?;
    gbf_sequence_wronskian_on(s, a, b)
}

/// `psi_m = sum_{j>m} (W(h_1..h_m, h_j) / W(h_1..h_m))` with pivots
/// `rho_{m+1} = (P_{m+1} / P_m) exp(q_{m+1})`.
pub fn gbf_sequence_wronskian_on(sum: &PgmSum, a: f64, b: f64) -> Result<PgmSequence> {
    let (c, s) = (0.5 * (a + b), 0.5 * (b - a));
    let terms = sum.terms();
    let n = terms.len();
    let mut diag: Vec<Polynomial> = vec![Polynomial::one()];
    for m in 1..=n {
        let refs: Vec<&PgmTerm> = terms[..m].iter().collect();
        let p = wronskian_poly_scaled(&refs, c, s)?;
        let scale: f64 = refs.iter().map(|t| t.p.compose_affine(c, s).max_norm()).product();
        if p.max_norm() <= sign_threshold() * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::LinearlyDependentTerms { order: m });
        }
        diag.push(p);
    }

    let mut levels = Vec::with_capacity(n);
    let mut rationals = Vec::with_capacity(n);
    for m in 0..n {
        let den = diag[m].clone();
        let mut nums = Vec::with_capacity(n - m);
        let mut points = Vec::with_capacity(n - m);
        for j in m + 1..=n {
            let mut refs: Vec<&PgmTerm> = terms[..m].iter().collect();
            refs.push(&terms[j - 1]);
            nums.push(if m == 0 { terms[j - 1].p.compose_affine(c, s) } else { wronskian_poly_scaled(&refs, c, s)? });
            points.push((PointWronskian::new(&refs), terms[j - 1].clone()));
        }
        let den_point = PointWronskian::new(&terms[..m].iter().collect::<Vec<_>>());
        let eval = if m == 0 {
            let f = sum.clone();
            Arc::new(move |x| f.sample(x)) as Arc<dyn Fn(f64) -> Sample + Send + Sync>
        } else {
            wronskian_level(points, den_point.clone())
        };
        let pn = PointWronskian::new(&terms[..=m].iter().collect::<Vec<_>>());
        let h = terms[m].clone();
        let pivot: Arc<dyn Fn(f64) -> Sample + Send + Sync> = Arc::new(move |x| {
            let v = pn.eval(x) / den_point.eval(x);
            Sample { value: v, scale: v.abs(), log_factor: h.exponent(x) }
        });
        let poles = real_roots_x(&den, c, s);
        let mut level = GbfLevel::new(format!("psi_{m}"), eval);
        level.pivot = Some(pivot);
        level.pivot_zeros = real_roots_x(&diag[m + 1], c, s);
        level.pivot_poles = poles.clone();
        level.poles = poles;
        levels.push(level.clip(a, b));
        rationals.push(nums.into_iter().map(|p| RationalFunction::new(p, den.clone())).collect());
    }
    Ok(PgmSequence { levels, interval: (a, b), center: c, width: s, rationals })
}

/// Sign-changing zeros on the bounding interval, Wronskian path.
pub fn find_roots_pgm(s: &PgmSum, eps: f64) -> Result<RootReport> {
    let seq = gbf_sequence_wronskian(s)?;
    let (a, b) = seq.interval;
    backward_scan(&seq.levels, a, b, eps)
}

/// Nonnegativity verdict; no normalization is claimed for this family.
pub fn certify_pgm(s: &PgmSum, eps: f64) -> Result<Verdict> {
    Ok(Verdict::from_report(&find_roots_pgm(s, eps)?, None))
}

/// For each point of the pair's grid and of `{a, b}`, the weight
/// `alpha = -h1(x) / h2(x)` at which `h1 + alpha h2` vanishes there.
///
/// The grid consists of the sign-changing real zeros of `W(h1, h2)` in `(a, b)`,
/// which do not depend on `alpha`.
pub fn alpha_thresholds(h1: &PgmTerm, h2: &PgmTerm, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let w = wronskian_poly_scaled(&[h1, h2], 0.0, 1.0)?;
    let mut pts = vec![a];
    pts.extend(isolate_real_roots(&w, a, b).into_iter().filter(|r| r.sign_changing).map(|r| r.x));
    pts.push(b);
    pts.into_iter()
        .map(|x| {
            let (p2, s2) = h2.p.eval_with_scale(x);
            if p2.abs() <= sign_threshold() * s2 {
                return Err(Error::PivotVanishes { x });
            }
            Ok((x, -h1.eval(x) / h2.eval(x)))
        })
        .collect()
}

/// `h1 + alpha h2`
pub fn pair(h1: &PgmTerm, h2: &PgmTerm, alpha: f64) -> Result<PgmSum> {
    PgmSum::new(vec![h1.clone(), h2.scaled(alpha)])
}
