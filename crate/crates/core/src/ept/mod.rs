//! EPT functions `f(x) = c exp(Ax) b` on `[0, inf)`.

use crate::certify::Verdict;
use crate::error::{Error, Result};
use crate::gbf::{backward_scan, RootReport};
use crate::numeric::matrix::solve;
use crate::numeric::{matrix_exp, Matrix, Polynomial, Vector};

mod factor;
mod modal;
mod sequence;
mod tail;

pub use factor::{char_factorize, RealFactorization};
pub use sequence::{annihilated, gbf_sequence_ept};
pub use tail::t_auto;

/// Tolerance on `-c A^{-1} b = 1` for densities.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// State-space triple with `f(x) = c exp(Ax) b`. Minimality is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct EptRealization {
    pub a: Matrix,
    pub b: Vector,
    pub c: Vector,
}

impl EptRealization {
    pub fn new(a: Matrix, b: Vector, c: Vector) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::InvalidInput(format!("A must be square and nonempty, got {}x{}", n, a.ncols())));
        }
        if b.len() != n || c.len() != n {
            return Err(Error::InvalidInput(format!(
                "b and c must have length {n}, got {} and {}",
                b.len(),
                c.len()
            )));
        }
        if a.iter().chain(b.iter()).chain(c.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("realization entries must be finite".into()));
        }
        Ok(EptRealization { a, b, c })
    }

    /// From row-major `A` and the vectors `b`, `c`.
    pub fn from_rows(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("A must be square".into()));
        }
        EptRealization::new(
            Matrix::from_fn(n, n, |i, j| a[i][j]),
            Vector::from_column_slice(b),
            Vector::from_column_slice(c),
        )
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// `Exp(lambda)` density.
    pub fn exponential(lambda: f64) -> Result<Self> {
        EptRealization::from_rows(&[vec![-lambda]], &[1.0], &[lambda])
    }

    /// `c exp(Ax) b` together with `sum |c_i| |exp(Ax)_ij| |b_j|`.
    pub fn sample(&self, x: f64) -> (f64, f64) {
        weighted_sample(&self.c, &matrix_exp(&self.a, x), &self.b)
    }

    /// Largest real part of the spectrum.
    pub fn spectral_abscissa(&self) -> f64 {
        self.a.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `integral_0^inf f = -c A^{-1} b` (requires a stable `A`).
    pub fn mass(&self) -> Result<f64> {
        self.check_stable()?;
        Ok(-self.c.dot(&solve(&self.a, &self.b)?))
    }

    pub fn check_stable(&self) -> Result<()> {
        let s = self.spectral_abscissa();
        if s < 0.0 {
            Ok(())
        } else {
            Err(Error::NotStable { abscissa: s })
        }
    }

    /// Stable with unit mass.
    pub fn check_density(&self) -> Result<()> {
        let m = self.mass()?;
        if (m - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { mass: m });
        }
        Ok(())
    }

    /// Realization of `-(1 - F)`, i.e. `c A^{-1} exp(Ax) b`.
    pub fn cdf_complement(&self) -> Result<EptRealization> {
        self.check_stable()?;
        let at = self.a.transpose();
        let c = solve(&at, &self.c)?;
        EptRealization::new(self.a.clone(), self.b.clone(), c)
    }

    /// `p(A)` applied on the left of `c`.
    pub fn premultiplied(&self, p: &Polynomial) -> EptRealization {
        let m = poly_of_matrix(p, &self.a);
        EptRealization { a: self.a.clone(), b: self.b.clone(), c: m.transpose() * &self.c }
    }

    /// Realization of `f - g` on the block-diagonal state space.
    pub fn difference(&self, g: &EptRealization) -> EptRealization {
        let (n, m) = (self.order(), g.order());
        let mut a = Matrix::zeros(n + m, n + m);
        a.view_mut((0, 0), (n, n)).copy_from(&self.a);
        a.view_mut((n, n), (m, m)).copy_from(&g.a);
        let b = Vector::from_iterator(n + m, self.b.iter().chain(g.b.iter()).copied());
        let c = Vector::from_iterator(n + m, self.c.iter().copied().chain(g.c.iter().map(|v| -v)));
        EptRealization { a, b, c }
    }
}

/// `c^T E b` and `sum |c_i E_ij b_j|`.
pub fn weighted_sample(c: &Vector, e: &Matrix, b: &Vector) -> (f64, f64) {
    let (mut v, mut s) = (0.0, 0.0);
    for i in 0..c.len() {
        for j in 0..b.len() {
            let t = c[i] * e[(i, j)] * b[j];
            v += t;
            s += t.abs();
        }
    }
    (v, s)
}

/// `p(A)` by Horner's rule.
pub fn poly_of_matrix(p: &Polynomial, a: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut m = Matrix::zeros(n, n);
    for &c in p.coeffs().iter().rev() {
        m = &m * a + Matrix::identity(n, n) * c;
    }
    m
}

/// `f(x) = c exp(Ax) b` for `x >= 0`.
pub fn ept_eval(r: &EptRealization, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "EPT functions are defined on [0, inf)");
    r.sample(x).0
}

/// `F(x) = 1 + c A^{-1} exp(Ax) b` for a stable, normalized realization.
pub fn ept_cdf(r: &EptRealization, x: f64) -> Result<f64> {
    r.check_density()?;
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    Ok(1.0 + ept_eval(&r.cdf_complement()?, x))
}

/// One Erlang term `w x^{m-1} exp(-lambda x)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ErlangTerm {
    pub w: f64,
    pub m: u32,
    pub lambda: f64,
}

/// Realization of `Lambda sum w_i x^{m_i - 1} exp(-lambda_i x)` with `Lambda`
/// chosen to give unit mass.
///
/// Terms are sorted by ascending `lambda`, then ascending `m`; terms with
/// equal `(lambda, m)` are merged. Each distinct rate gets one Jordan block.
pub fn erlang_mixture(params: &[ErlangTerm]) -> Result<EptRealization> {
    let mut terms: Vec<ErlangTerm> = Vec::new();
    for t in params {
        if !(t.lambda > 0.0 && t.lambda.is_finite()) || t.m == 0 || !t.w.is_finite() {
            return Err(Error::InvalidInput(format!("invalid Erlang term {t:?}")));
        }
        match terms.iter_mut().find(|s| s.lambda == t.lambda && s.m == t.m) {
            Some(s) => s.w += t.w,
            None => terms.push(*t),
        }
    }
    terms.retain(|t| t.w != 0.0);
    if terms.is_empty() {
        return Err(Error::InvalidInput("Erlang mixture has no nonzero term".into()));
    }
    terms.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.m.cmp(&b.m)));

    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let mass: f64 = terms.iter().map(|t| t.w * fact(t.m - 1) / t.lambda.powi(t.m as i32)).sum();
    if !(mass > 0.0) {
        return Err(Error::NotNormalizable { mass });
    }
    let norm = 1.0 / mass;

    let mut rates: Vec<(f64, u32)> = Vec::new();
    for t in &terms {
        match rates.last_mut() {
            Some((l, m)) if *l == t.lambda => *m = (*m).max(t.m),
            _ => rates.push((t.lambda, t.m)),
        }
    }
    let n: usize = rates.iter().map(|&(_, m)| m as usize).sum();
    let mut a = Matrix::zeros(n, n);
    let mut b = Vector::zeros(n);
    let mut c = Vector::zeros(n);
    let mut off = 0;
    for &(lambda, size) in &rates {
        let size = size as usize;
        for i in 0..size {
            a[(off + i, off + i)] = -lambda;
            if i + 1 < size {
                a[(off + i, off + i + 1)] = 1.0;
            }
        }
        b[off + size - 1] = 1.0;
        // Row i of exp(Ax) b is x^{size-1-i} exp(-lambda x) / (size-1-i)!.
        for t in terms.iter().filter(|t| t.lambda == lambda) {
            c[off + size - t.m as usize] += norm * t.w * fact(t.m - 1);
        }
        off += size;
    }
    EptRealization::new(a, b, c)
}

/// Sign-changing zeros on `[0, T]`, with `T` given or from [`t_auto`].
pub fn find_roots_ept(r: &EptRealization, eps: f64, scan_end: Option<f64>) -> Result<RootReport> {
    let t = match scan_end {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => return Err(Error::InvalidInput(format!("scan end must be positive, got {t}"))),
        None => t_auto(r)?,
    };
    let fac = char_factorize(&r.a)?;
    let levels = gbf_sequence_ept(r, &fac, 0.0, t)?;
    backward_scan(&levels, 0.0, t, eps)
}

/// Verdict on `[0, T]`; the mass is reported when `A` is stable.
pub fn certify_ept(r: &EptRealization, eps: f64, scan_end: Option<f64>) -> Result<Verdict> {
    let report = find_roots_ept(r, eps, scan_end)?;
    Ok(Verdict::from_report(&report, r.mass().ok()))
}
