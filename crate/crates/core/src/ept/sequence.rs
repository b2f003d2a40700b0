use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Complex;

use super::factor::quadratic;
use super::modal::Modal;
use super::{poly_of_matrix, weighted_sample, EptRealization, RealFactorization};
use crate::error::{Error, Result};
use crate::gbf::{GbfLevel, Sample};
use crate::numeric::{matrix_exp, Matrix, Polynomial, Vector};

/// Zeros `k pi / omega` of `sin(omega x)` in `[a, b]`.
fn sin_grid(omega: f64, a: f64, b: f64) -> Vec<f64> {
    let step = PI / omega;
    let first = (a / step).ceil() as i64;
    let last = (b / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn row_times(c: &Vector, m: &Matrix) -> Vector {
    m.transpose() * c
}

/// Levels of the sequence on `[a, b]`: linear factors `(D - lambda)` first,
/// each with pivot `exp(lambda x)`, then two levels per quadratic factor.
///
/// For `x^2 - 2 theta x + rho^2` with `omega = sqrt(rho^2 - theta^2)` and
/// incoming level `psi`, the first level has pivot `exp(theta x) sin(omega x)`
/// and the next one is
/// `exp(-theta x) [(psi' - theta psi) sin(omega x) - omega psi cos(omega x)]`,
/// which differentiates to `exp(-theta x) sin(omega x) p(D) psi`.
pub fn gbf_sequence_ept(r: &EptRealization, fac: &RealFactorization, a: f64, b: f64) -> Result<Vec<GbfLevel>> {
    if !(a >= 0.0 && b > a) {
        return Err(Error::InvalidInput(format!("scan interval [{a}, {b}] must lie in [0, inf)")));
    }
    if fac.degree() != r.order() {
        return Err(Error::InvalidInput("factorization degree differs from the realization order".into()));
    }
    let n = r.order();
    let b_vec = Arc::new(r.b.clone());
    let id = Matrix::identity(n, n);
    let mut acc = r.c.clone();
    let mut levels = Vec::with_capacity(n);

    let modal = Modal::new(r).map(Arc::new);
    let mut mult = modal.as_ref().map(|m| m.ones()).unwrap_or_default();
    // Without a modal form, exponentials are taken relative to the slowest mode.
    let shift = r.spectral_abscissa().min(0.0);
    let shifted = Arc::new(&r.a - &id * shift);

    let plain_level = |c: Vector, mult: &[Complex<f64>]| -> Arc<dyn Fn(f64) -> Sample + Send + Sync> {
        if let Some(m) = &modal {
            let (m, mult) = (m.clone(), mult.to_vec());
            return Arc::new(move |x| m.sample(&mult, x));
        }
        let (sh, b_vec) = (shifted.clone(), b_vec.clone());
        Arc::new(move |x| {
            let (v, s) = weighted_sample(&c, &matrix_exp(&sh, x), &b_vec);
            Sample { value: v, scale: s, log_factor: shift * x }
        })
    };

    for &lambda in &fac.linear {
        let mut level = GbfLevel::new(format!("psi_{}", levels.len()), plain_level(acc.clone(), &mult));
        level.pivot = Some(Arc::new(move |x| Sample { value: 1.0, scale: 1.0, log_factor: lambda * x }));
        levels.push(level);
        acc = row_times(&acc, &(&r.a - &id * lambda));
        if let Some(m) = &modal {
            m.remove_linear(&mut mult, lambda);
        }
    }

    for &(theta, rho) in &fac.quadratic {
        let omega = (rho * rho - theta * theta).sqrt();
        let zeros = sin_grid(omega, a, b);

        let mut first = GbfLevel::new(format!("psi_{}", levels.len()), plain_level(acc.clone(), &mult));
        first.pivot = Some(Arc::new(move |x| Sample { value: (omega * x).sin(), scale: 1.0, log_factor: theta * x }));
        first.gauge = Some(Arc::new(move |x| Sample { value: (omega * x).sin(), scale: 1.0, log_factor: -theta * x }));
        first.pivot_zeros = zeros.clone();
        levels.push(first);

        let cv = acc.clone();
        let cu = row_times(&acc, &(&r.a - &id * theta));
        let combine = move |x: f64, (u, su): (f64, f64), (v, sv): (f64, f64), lf: f64| {
            let (s, c) = (omega * x).sin_cos();
            Sample { value: u * s - omega * v * c, scale: su * s.abs() + omega * sv * c.abs(), log_factor: lf - theta * x }
        };
        let eval: Arc<dyn Fn(f64) -> Sample + Send + Sync> = match &modal {
            Some(m) => {
                let (m, mv) = (m.clone(), mult.clone());
                let mu: Vec<Complex<f64>> = mv.iter().zip(&m.lambda).map(|(k, l)| k * (l - theta)).collect();
                Arc::new(move |x| {
                    let ([u, v], lf) = m.samples([&mu, &mv], x);
                    combine(x, u, v, lf)
                })
            }
            None => {
                let (sh, b_v) = (shifted.clone(), b_vec.clone());
                Arc::new(move |x| {
                    let e = matrix_exp(&sh, x);
                    combine(x, weighted_sample(&cu, &e, &b_v), weighted_sample(&cv, &e, &b_v), shift * x)
                })
            }
        };
        let mut second = GbfLevel::new(format!("psi_{}", levels.len()), eval);
        second.pivot = Some(Arc::new(|_| Sample::plain(1.0, 1.0)));
        second.gauge = Some(Arc::new(move |x| Sample { value: 1.0 / (omega * x).sin(), scale: 1.0, log_factor: theta * x }));
        second.pivot_zeros = zeros;
        levels.push(second);

        acc = row_times(&acc, &poly_of_matrix(&quadratic(theta, rho), &r.a));
        if let Some(m) = &modal {
            m.remove_quadratic(&mut mult, theta, rho);
        }
    }
    Ok(levels.into_iter().map(|l| l.clip(a, b)).collect())
}

/// `c p(A) exp(Ax) b` for the full characteristic polynomial, with its scale.
pub fn annihilated(r: &EptRealization, p: &Polynomial, x: f64) -> (f64, f64) {
    let e = matrix_exp(&r.a, x);
    let pa = poly_of_matrix(p, &r.a);
    let (v, _) = weighted_sample(&row_times(&r.c, &pa), &e, &r.b);
    let norm_a = crate::numeric::matrix::norm1(&r.a);
    let bound: f64 = p.coeffs().iter().enumerate().map(|(k, c)| c.abs() * norm_a.powi(k as i32)).sum();
    let (_, s) = weighted_sample(&r.c, &e, &r.b);
    (v, s.max(r.c.amax() * r.b.amax() * crate::numeric::matrix::norm1(&e)) * bound)
}
