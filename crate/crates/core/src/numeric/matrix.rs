use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real matrix.
pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Determinant by partial-pivot LU.
pub fn determinant(m: &Matrix) -> f64 {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.nrows() == 0 {
        return 1.0;
    }
    m.clone().lu().determinant()
}

pub fn solve(m: &Matrix, rhs: &Vector) -> Result<Vector> {
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::InvalidInput("singular matrix".into()))
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("singular matrix".into()))
}

/// Maximum absolute column sum.
pub fn norm1(m: &Matrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// `exp(A t)` by scaling and squaring with the degree-13 Padé approximant.
pub fn matrix_exp(a: &Matrix, t: f64) -> Matrix {
    assert!(a.is_square(), "matrix exponential of a non-square matrix");
    let n = a.nrows();
    let at = a * t;
    let norm = norm1(&at);
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let x = &at * 2f64.powi(-s);
    let id = Matrix::identity(n, n);
    let b = &PADE13;
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;
    let u_inner = &x6 * (&x6 * b[13] + &x4 * b[11] + &x2 * b[9]) + &x6 * b[7] + &x4 * b[5] + &x2 * b[3] + &id * b[1];
    let u = &x * u_inner;
    let v = &x6 * (&x6 * b[12] + &x4 * b[10] + &x2 * b[8]) + &x6 * b[6] + &x4 * b[4] + &x2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Pade denominator is nonsingular after scaling");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}
