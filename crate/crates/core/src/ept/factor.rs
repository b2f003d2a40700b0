use nalgebra::linalg::Schur;
use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::numeric::{Matrix, Polynomial};

/// Radius (relative to `max(1, |z|)`) within which eigenvalues are tried as one cluster.
const CLUSTER_RADIUS: f64 = 1e-3;
/// A cluster is merged only when this changes the characteristic polynomial
/// by at most this much, relative to its max-norm.
const MERGE_TOL: f64 = 1e-10;

/// `p(x) = prod (x - lambda_i) prod (x^2 - 2 theta_i x + rho_i^2)`, with
/// factors listed in application order: linear by ascending `|lambda|`,
/// quadratic by ascending `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFactorization {
    pub linear: Vec<f64>,
    /// `(theta, rho)` with `|theta| < rho`.
    pub quadratic: Vec<(f64, f64)>,
}

impl RealFactorization {
    pub fn degree(&self) -> usize {
        self.linear.len() + 2 * self.quadratic.len()
    }

    pub fn polynomial(&self) -> Polynomial {
        let mut p = Polynomial::one();
        for &l in &self.linear {
            p = &p * &Polynomial::linear(-l, 1.0);
        }
        for &(t, r) in &self.quadratic {
            p = &p * &quadratic(t, r);
        }
        p
    }
}

pub(crate) fn quadratic(theta: f64, rho: f64) -> Polynomial {
    Polynomial::new(vec![rho * rho, -2.0 * theta, 1.0])
}

fn complex_poly(roots: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let mut c = vec![Complex::new(1.0, 0.0)];
    for &z in roots {
        let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * z;
        }
        c = next;
    }
    c
}

/// Eigenvalues of `A` from a real Schur decomposition, regrouped into real factors.
///
/// Multiple eigenvalues come back from the iteration split into clusters of
/// radius about `eps^{1/k}`. A cluster is replaced by its mean when the
/// resulting `(x - mean)^k` reproduces the product over the cluster.
pub fn char_factorize(a: &Matrix) -> Result<RealFactorization> {
    let n = a.nrows();
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;
    let raw: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    if raw.len() != n || raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigenFailure);
    }

    // Single-linkage clusters.
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            let s = raw[i].norm().max(raw[j].norm()).max(1.0);
            if (raw[i] - raw[j]).norm() <= CLUSTER_RADIUS * s {
                let (li, lj) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == li {
                        *l = lj;
                    }
                }
            }
        }
    }
    let mut eig: Vec<Complex<f64>> = Vec::with_capacity(n);
    let mut groups: Vec<usize> = label.clone();
    groups.sort();
    groups.dedup();
    for g in groups {
        let members: Vec<Complex<f64>> = (0..n).filter(|&i| label[i] == g).map(|i| raw[i]).collect();
        let k = members.len();
        let mean = members.iter().sum::<Complex<f64>>() / k as f64;
        let exact = complex_poly(&members);
        let merged = complex_poly(&vec![mean; k]);
        let norm = exact.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let diff = exact.iter().zip(&merged).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if k > 1 && diff <= MERGE_TOL * norm {
            eig.extend(std::iter::repeat(mean).take(k));
        } else {
            eig.extend(members);
        }
    }

    let mut linear = Vec::new();
    let mut upper = Vec::new();
    let mut lower = 0usize;
    for z in eig {
        if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
            linear.push(z.re);
        } else if z.im > 0.0 {
            upper.push((z.re, z.norm()));
        } else {
            lower += 1;
        }
    }
    if lower != upper.len() {
        return Err(Error::EigenFailure);
    }
    linear.sort_by(|x, y| x.abs().total_cmp(&y.abs()).then(x.total_cmp(y)));
    upper.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.total_cmp(&y.0)));
    Ok(RealFactorization { linear, quadratic: upper })
}
