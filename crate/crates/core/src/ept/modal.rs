use nalgebra::{Complex, DMatrix, DVector};

use super::EptRealization;
use crate::gbf::Sample;

type C = Complex<f64>;

/// Largest accepted condition number of the eigenvector matrix.
const MAX_COND: f64 = 1e6;

/// `c exp(Ax) b = sum_j gamma_j exp(lambda_j x)` for a diagonalizable `A`.
///
/// Levels are the same sum with each `gamma_j` multiplied by a factor; modes
/// removed by a factor are masked to exactly zero, so a removed slow mode
/// cannot reappear as rounding noise far out on the half-line.
#[derive(Debug, Clone)]
pub(crate) struct Modal {
    pub lambda: Vec<C>,
    pub gamma: Vec<C>,
}

impl Modal {
    /// `None` when `A` is defective or its eigenbasis is ill-conditioned.
    pub fn new(r: &EptRealization) -> Option<Modal> {
        let n = r.order();
        let a = r.a.map(|v| C::new(v, 0.0));
        let lambda: Vec<C> = r.a.complex_eigenvalues().iter().copied().collect();
        let mut v = DMatrix::<C>::zeros(n, n);
        for (j, &l) in lambda.iter().enumerate() {
            let m = &a - DMatrix::<C>::identity(n, n) * l;
            let svd = m.svd(false, true);
            let vt = svd.v_t?;
            let k = (0..n).min_by(|&p, &q| svd.singular_values[p].total_cmp(&svd.singular_values[q]))?;
            for i in 0..n {
                v[(i, j)] = vt[(k, i)].conj();
            }
        }
        let vinv = v.clone().try_inverse()?;
        let cond = v.norm() * vinv.norm();
        if !(cond <= MAX_COND) {
            return None;
        }
        let d = DMatrix::from_diagonal(&DVector::from_vec(lambda.clone()));
        let norm_a = a.norm().max(1.0);
        if (&a * &v - &v * d).norm() > 1e-10 * norm_a * v.norm() {
            return None;
        }
        let cv = v.transpose() * r.c.map(|x| C::new(x, 0.0));
        let vb = vinv * r.b.map(|x| C::new(x, 0.0));
        let gamma = (0..n).map(|j| cv[j] * vb[j]).collect();
        Some(Modal { lambda, gamma })
    }

    pub fn ones(&self) -> Vec<C> {
        vec![C::new(1.0, 0.0); self.lambda.len()]
    }

    /// Multiplies by `lambda - mu` and masks the unmasked real mode closest to `mu`.
    pub fn remove_linear(&self, mult: &mut [C], mu: f64) {
        self.mask_nearest(mult, C::new(mu, 0.0));
        for (m, l) in mult.iter_mut().zip(&self.lambda) {
            *m *= l - mu;
        }
    }

    /// Multiplies by `lambda^2 - 2 theta lambda + rho^2` and masks the closest conjugate pair.
    pub fn remove_quadratic(&self, mult: &mut [C], theta: f64, rho: f64) {
        let omega = (rho * rho - theta * theta).max(0.0).sqrt();
        self.mask_nearest(mult, C::new(theta, omega));
        self.mask_nearest(mult, C::new(theta, -omega));
        for (m, l) in mult.iter_mut().zip(&self.lambda) {
            *m *= l * l - l * (2.0 * theta) + rho * rho;
        }
    }

    fn mask_nearest(&self, mult: &mut [C], z: C) {
        let j = (0..mult.len())
            .filter(|&j| mult[j] != C::new(0.0, 0.0))
            .min_by(|&p, &q| (self.lambda[p] - z).norm().total_cmp(&(self.lambda[q] - z).norm()));
        if let Some(j) = j {
            mult[j] = C::new(0.0, 0.0);
        }
    }

    /// `sum_j gamma_j m_j exp(lambda_j x)` for each multiplier set, on a
    /// common factor `exp(log_factor)` set by the slowest live mode.
    pub fn samples<const K: usize>(&self, mults: [&[C]; K], x: f64) -> ([(f64, f64); K], f64) {
        let live = |j: usize| mults.iter().any(|m| m[j] != C::new(0.0, 0.0) && self.gamma[j] != C::new(0.0, 0.0));
        let lf = (0..self.lambda.len())
            .filter(|&j| live(j))
            .map(|j| self.lambda[j].re * x)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut out = [(0.0, 0.0); K];
        if lf == f64::NEG_INFINITY {
            return (out, 0.0);
        }
        for (j, l) in self.lambda.iter().enumerate().filter(|&(j, _)| live(j)) {
            let e = (l * x - lf).exp();
            for (o, m) in out.iter_mut().zip(&mults) {
                let t = self.gamma[j] * m[j] * e;
                o.0 += t.re;
                o.1 += t.norm();
            }
        }
        (out, lf)
    }

    pub fn sample(&self, mult: &[C], x: f64) -> Sample {
        let ([(value, scale)], lf) = self.samples([mult], x);
        Sample { value, scale, log_factor: lf }
    }
}
