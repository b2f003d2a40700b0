use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real polynomial with coefficients in ascending order.
///
/// The representation is normalized: the last stored coefficient is nonzero,
/// and the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Polynomial {
    fn from(coeffs: Vec<f64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c0 + c1 x`
    pub fn linear(c0: f64, c1: f64) -> Self {
        Polynomial::new(vec![c0, c1])
    }

    /// Monic polynomial with the given real roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Polynomial::one(), |acc, &r| &acc * &Polynomial::linear(-r, 1.0))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Sum of coefficient magnitudes; bounds `|p|` on `[-1, 1]`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Value together with the magnitude scale `sum |c_i| |x|^i`.
    pub fn eval_with_scale(&self, x: f64) -> (f64, f64) {
        let ax = x.abs();
        let mut v = 0.0;
        let mut s = 0.0;
        for &c in self.coeffs.iter().rev() {
            v = v * x + c;
            s = s * ax + c.abs();
        }
        (v, s)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(1.0 / self.leading())
    }

    /// `p(center + width * t)` as a polynomial in `t`.
    pub fn compose_affine(&self, center: f64, width: f64) -> Polynomial {
        let lin = Polynomial::linear(center, width);
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, &c| &(&acc * &lin) + &Polynomial::constant(c))
    }

    /// `p(-x)`
    pub fn reflect(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    /// Drops trailing coefficients whose magnitude is below `tol * max_norm`.
    pub fn trim_relative(&self, tol: f64) -> Polynomial {
        let cut = tol * self.max_norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        Polynomial::new(coeffs)
    }

    /// Cauchy bound: every complex root has modulus at most this value.
    pub fn root_bound(&self) -> f64 {
        if self.degree() == 0 {
            return 0.0;
        }
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs() / lead))
    }

    /// Coefficientwise distance relative to the larger max-norm.
    pub fn relative_distance(&self, other: &Polynomial) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let diff = (0..n).fold(0.0_f64, |m, i| m.max((self.coeff(i) - other.coeff(i)).abs()));
        let norm = self.max_norm().max(other.max_norm());
        if norm == 0.0 {
            0.0
        } else {
            diff / norm
        }
    }

    /// Euclidean division returning `(quotient, remainder)`.
    pub fn div_rem(&self, den: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!den.is_zero(), "division by the zero polynomial");
        if self.coeffs.len() < den.coeffs.len() {
            return (Polynomial::zero(), self.clone());
        }
        let (q, r) = top_down(&self.coeffs, &den.coeffs);
        let dd = den.degree();
        (Polynomial::new(q), Polynomial::new(r[..dd].to_vec()))
    }

    /// Division known to be exact up to rounding.
    ///
    /// Three quotients are formed (from the top, from the bottom, and a blend
    /// of both halves) and the one with the smallest residual is kept. Fails
    /// when `|num - q den| > tol |num|` in the max-norm.
    pub fn div_exact(&self, den: &Polynomial, tol: f64) -> Result<Polynomial> {
        self.div_exact_scaled(den, tol, self.max_norm())
    }

    /// As [`Polynomial::div_exact`], with the residual measured against `scale`
    /// instead of `|num|`. Useful when `num` is itself the result of cancellation.
    pub fn div_exact_scaled(&self, den: &Polynomial, tol: f64, scale: f64) -> Result<Polynomial> {
        assert!(!den.is_zero(), "division by the zero polynomial");
        let num_norm = scale;
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        if self.coeffs.len() < den.coeffs.len() {
            let rel = self.max_norm() / num_norm;
            if rel <= tol {
                return Ok(Polynomial::zero());
            }
            return Err(Error::DivisionNotExact { residual: rel, tol });
        }
        let (top, _) = top_down(&self.coeffs, &den.coeffs);
        let mut candidates = vec![top.clone()];
        if let Some(bottom) = bottom_up(&self.coeffs, &den.coeffs) {
            let half = top.len() / 2;
            let blend: Vec<f64> = (0..top.len())
                .map(|i| if i >= half { top[i] } else { bottom[i] })
                .collect();
            candidates.push(bottom);
            candidates.push(blend);
        }
        if let Some(q) = least_squares_quotient(&self.coeffs, &den.coeffs) {
            candidates.push(q);
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        for q in candidates {
            let qp = Polynomial::new(q.clone());
            let resid = (self - &(&qp * den)).max_norm();
            if best.as_ref().is_none_or(|(r, _)| resid < *r) {
                best = Some((resid, q));
            }
        }
        let (resid, q) = best.expect("at least one candidate");
        let rel = resid / num_norm;
        if rel > tol || !rel.is_finite() {
            return Err(Error::DivisionNotExact { residual: rel, tol });
        }
        Ok(Polynomial::new(q))
    }
}

/// `q` minimizing `|num - q den|_2` over the convolution matrix of `den`.
fn least_squares_quotient(num: &[f64], den: &[f64]) -> Option<Vec<f64>> {
    let qn = num.len() - den.len() + 1;
    let conv = nalgebra::DMatrix::from_fn(num.len(), qn, |i, j| if i >= j && i - j < den.len() { den[i - j] } else { 0.0 });
    let rhs = nalgebra::DVector::from_column_slice(num);
    let q = conv.svd(true, true).solve(&rhs, 0.0).ok()?;
    q.iter().all(|c| c.is_finite()).then(|| q.iter().copied().collect())
}

fn top_down(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dd = den.len() - 1;
    let qn = num.len() - den.len() + 1;
    let lead = den[dd];
    let mut r = num.to_vec();
    let mut q = vec![0.0; qn];
    for i in (0..qn).rev() {
        let c = r[i + dd] / lead;
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    (q, r)
}

fn bottom_up(num: &[f64], den: &[f64]) -> Option<Vec<f64>> {
    let shift = den.iter().position(|&c| c != 0.0)?;
    let qn = num.len() - den.len() + 1;
    let low = den[shift];
    let mut q = vec![0.0; qn];
    for i in 0..qn {
        let mut acc = num[i + shift];
        for j in 1..=i.min(den.len() - 1 - shift) {
            acc -= q[i - j] * den[shift + j];
        }
        q[i] = acc / low;
    }
    Some(q)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
