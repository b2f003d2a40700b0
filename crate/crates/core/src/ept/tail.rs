use super::factor::quadratic;
use super::{char_factorize, poly_of_matrix, weighted_sample, EptRealization};
use crate::error::{Error, Result};
use crate::numeric::matrix::solve;
use crate::numeric::{isolate_real_roots, matrix_exp, Matrix, Polynomial, Vector};

/// Amplitude ratio required between the slow component and the rest.
const DOMINANCE: f64 = 10.0;
/// Relative size below which a spectral component counts as not excited.
const EXCITATION_TOL: f64 = 1e-10;

/// One distinct factor `s(x)^k` of the characteristic polynomial.
struct Mode {
    re: f64,
    real: bool,
    root: f64,
    power: Polynomial,
}

fn modes(a: &Matrix) -> Result<(Vec<Mode>, Polynomial)> {
    let fac = char_factorize(a)?;
    let mut out: Vec<Mode> = Vec::new();
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    for &l in &fac.linear {
        match out.iter_mut().find(|m| m.real && close(m.root, l)) {
            Some(m) => m.power = &m.power * &Polynomial::linear(-m.root, 1.0),
            None => out.push(Mode { re: l, real: true, root: l, power: Polynomial::linear(-l, 1.0) }),
        }
    }
    for &(t, r) in &fac.quadratic {
        match out.iter_mut().find(|m| !m.real && close(m.re, t) && close(m.root, r)) {
            Some(m) => m.power = &m.power * &quadratic(m.re, m.root),
            None => out.push(Mode { re: t, real: false, root: r, power: quadratic(t, r) }),
        }
    }
    out.sort_by(|x, y| y.re.total_cmp(&x.re));
    Ok((out, fac.polynomial()))
}

/// Spectral projector onto the generalized eigenspace of `s`: `v(A) r(A)`
/// with `r = p / s` and `v r = 1 mod s`.
fn projector(a: &Matrix, p: &Polynomial, s: &Polynomial) -> Result<Matrix> {
    let r = p.div_rem(s).0;
    let d = s.degree();
    let mut sys = Matrix::zeros(d, d);
    let mut xr = r.clone();
    for j in 0..d {
        let rem = xr.div_rem(s).1;
        for i in 0..d {
            sys[(i, j)] = rem.coeff(i);
        }
        xr = &xr * &Polynomial::linear(0.0, 1.0);
    }
    let mut rhs = Vector::zeros(d);
    rhs[0] = 1.0;
    let v = Polynomial::new(solve(&sys, &rhs)?.iter().copied().collect());
    Ok(poly_of_matrix(&(&v * &r), a))
}

/// Suggested right end `T` of the scan interval.
///
/// The slowest excited spectral component `f_s = c P exp(Ax) b` is split
/// off with its projector `P`. It must be real, so that `f_s` is a
/// polynomial times `exp(lambda x)`; `T` starts beyond the real zeros of that
/// polynomial and doubles until the remainder is at most a tenth of `|f_s|`
/// at 16 points of `[T, 2T]`.
pub fn t_auto(r: &EptRealization) -> Result<f64> {
    let (ms, p) = modes(&r.a)?;
    let n = r.order();
    let scale = r.c.amax() * r.b.amax();
    for m in &ms {
        let proj = projector(&r.a, &p, &m.power)?;
        let cp = proj.transpose() * &r.c;
        let k = m.power.degree();
        let norm_a = crate::numeric::matrix::norm1(&r.a).max(1.0);
        let mut excited = false;
        let mut v = r.b.clone();
        for j in 0..k {
            if cp.dot(&v).abs() > EXCITATION_TOL * scale * norm_a.powi(j as i32) {
                excited = true;
            }
            v = &r.a * v;
        }
        if !excited {
            continue;
        }
        if !m.real {
            return Err(Error::TailUnresolved(format!(
                "slowest excited mode is oscillatory (real part {}); pass an explicit scan end",
                m.re
            )));
        }
        let lambda = m.root;
        // f_s(x) = exp(lambda x) sum_j c P (A - lambda)^j b x^j / j!
        let shifted = &r.a - Matrix::identity(n, n) * lambda;
        let mut coeffs = Vec::with_capacity(k);
        let mut v = r.b.clone();
        let mut fact = 1.0;
        for j in 0..k {
            if j > 0 {
                fact *= j as f64;
            }
            coeffs.push(cp.dot(&v) / fact);
            v = &shifted * v;
        }
        let poly = Polynomial::new(coeffs);
        let bound = poly.root_bound();
        let last_root = isolate_real_roots(&poly, -bound - 1.0, bound + 1.0)
            .into_iter()
            .map(|z| z.x)
            .fold(0.0, f64::max);
        let ident = Matrix::identity(n, n);
        let rest = (&ident - &proj).transpose() * &r.c;
        let ok = |t: f64| {
            (0..16).all(|i| {
                let x = t * (1.0 + i as f64 / 15.0);
                let e = matrix_exp(&r.a, x);
                let slow = weighted_sample(&cp, &e, &r.b).0;
                let fast = weighted_sample(&rest, &e, &r.b).0;
                DOMINANCE * fast.abs() <= slow.abs()
            })
        };
        let mut t = (last_root + 1.0).max(1.0 / lambda.abs().max(1e-300)).min(1e6);
        while !ok(t) {
            t *= 2.0;
            if lambda * t < -600.0 || t > 1e12 {
                return Err(Error::TailUnresolved(format!("no dominance of the mode {lambda} found before {t}")));
            }
        }
        log::debug!("scan end {t} from mode {lambda} of multiplicity {k}");
        return Ok(t);
    }
    log::debug!("no excited mode; the function vanishes identically");
    Ok(1.0)
}
