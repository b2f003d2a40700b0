use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

use super::poly::Polynomial;
use crate::error::Result;

/// Tolerance for the exact polynomial divisions of the Q recursion.
pub const EXACT_DIV_TOL: f64 = 1e-8;

/// Square matrix of polynomials stored by rows.
pub type PolyMatrix = Vec<Vec<Polynomial>>;

/// Determinant of a polynomial matrix.
///
/// The determinant is evaluated by pivoted LU at `N` roots of unity, with
/// `N - 1` the sum of the row degrees, and its coefficients are recovered by
/// a discrete Fourier transform. A determinant that vanishes at every node
/// is returned as the zero polynomial.
pub fn poly_determinant(m: &PolyMatrix) -> Result<Polynomial> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let bound: usize = m.iter().map(|r| r.iter().map(|p| if p.is_zero() { 0 } else { p.degree() }).max().unwrap_or(0)).sum();
    let nodes = bound + 1;
    let mut values = Vec::with_capacity(nodes);
    let mut vmax = 0.0f64;
    for k in 0..nodes {
        let z = Complex::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
        let a = DMatrix::from_fn(n, n, |i, j| eval_complex(&m[i][j], z));
        let d = a.determinant();
        vmax = vmax.max(d.norm());
        values.push(d);
    }
    if vmax == 0.0 {
        return Ok(Polynomial::zero());
    }
    let coeffs = (0..nodes)
        .map(|j| {
            let s: Complex<f64> = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex::from_polar(1.0, -2.0 * PI * ((j * k) % nodes) as f64 / nodes as f64))
                .sum();
            s.re / nodes as f64
        })
        .collect();
    Ok(Polynomial::new(coeffs))
}

/// Determinant by fraction-free (Bareiss) elimination with exact divisions.
///
/// Each step divides by the previous pivot, a division that is exact in exact
/// arithmetic; rows are swapped to bring the largest available pivot forward.
/// Accurate for small, well-scaled matrices; the divisions fail with
/// `DivisionNotExact` once rounding dominates.
pub fn poly_determinant_bareiss(m: &PolyMatrix) -> Result<Polynomial> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let mut a = m.clone();
    let mut sign = 1.0;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].max_norm().total_cmp(&a[j][k].max_norm()))
            .expect("nonempty range");
        if a[piv][k].is_zero() {
            return Ok(Polynomial::zero());
        }
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let l = &a[k][k] * &a[i][j];
                let r = &a[i][k] * &a[k][j];
                let scale = l.max_norm().max(r.max_norm());
                let num = &l - &r;
                a[i][j] = if num.is_zero() { num } else { num.div_exact_scaled(&prev, EXACT_DIV_TOL, scale)? };
            }
        }
        prev = a[k][k].clone();
    }
    Ok(a[n - 1][n - 1].scale(sign))
}

fn eval_complex(p: &Polynomial, z: Complex<f64>) -> Complex<f64> {
    p.coeffs().iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}
