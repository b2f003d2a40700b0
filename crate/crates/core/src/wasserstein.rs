//! Wasserstein-1 distances `integral |F - G|` from the sign-changing zeros of `F - G`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certify::Verdict;
use crate::ept::{find_roots_ept, t_auto, weighted_sample, EptRealization};
use crate::error::{Error, Result};
use crate::gaussmix::{bounding_interval, certify_pdf, gbf_sequence_on, GaussianComponent, GaussianMixture, QPath};
use crate::gbf::{backward_scan, GbfLevel, Sample};
use crate::numeric::matrix::solve;
use crate::numeric::normal::{cdf, cdf_antiderivative, sf, upper_antiderivative, INV_SQRT_2PI};
use crate::numeric::matrix_exp;

/// Default exponent of the moment bound on the tails.
pub const DEFAULT_P: f64 = 2.0;
/// Default bound on the neglected tail mass.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Relative size of the EPT remainder left unscanned when no tail dominance exists.
const NEGLIGIBLE_TAIL: f64 = 1e-17;

/// Distance with the data it was assembled from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct W1Result {
    pub distance: f64,
    pub zeros: Vec<f64>,
    /// Signed integrals of `F - G` between consecutive breakpoints.
    pub pieces: Vec<f64>,
    /// Bound on `integral |F - G|` outside the integrated range (zero when the tails are exact).
    pub tail_bound: f64,
    /// `C` of the bound `C / L^{p-1}` and the exponent `p`, for the Gaussian path.
    pub moment_constant: Option<f64>,
    pub p: Option<f64>,
    /// Half-width `L` of the integrated range `[-L, L]`, for the Gaussian path.
    pub half_width: Option<f64>,
}

/// `mu Phi(alpha x + beta)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiTerm {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// `w = F - G` in one of the two supported forms.
#[derive(Debug, Clone)]
pub enum CdfDifference {
    EptPair(EptRealization, EptRealization),
    /// `sum mu_i Phi(alpha_i x + beta_i)` with `sum mu_i = 0` and `alpha_i > 0`.
    GaussPhiSum(Vec<PhiTerm>),
}

impl CdfDifference {
    pub fn gaussian(f: &GaussianMixture, g: &GaussianMixture) -> CdfDifference {
        let mut terms: Vec<PhiTerm> = Vec::new();
        let comps = f.components().iter().map(|c| (c, 1.0)).chain(g.components().iter().map(|c| (c, -1.0)));
        for (c, sign) in comps {
            let (alpha, beta) = (1.0 / c.sigma(), -c.mu / c.sigma());
            let mu = sign * c.mass();
            match terms.iter_mut().find(|t| t.alpha == alpha && t.beta == beta) {
                Some(t) => t.mu += mu,
                None => terms.push(PhiTerm { mu, alpha, beta }),
            }
        }
        terms.retain(|t| t.mu != 0.0);
        CdfDifference::GaussPhiSum(terms)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            CdfDifference::EptPair(f, g) => {
                Ok(crate::ept::ept_cdf(f, x.max(0.0))? - crate::ept::ept_cdf(g, x.max(0.0))?)
            }
            CdfDifference::GaussPhiSum(t) => Ok(phi_sum_sample(t, x).value),
        }
    }
}

/// Uses `sum mu_i Phi = -sum mu_i (1 - Phi)` whichever has the smaller terms.
fn phi_sum_sample(terms: &[PhiTerm], x: f64) -> Sample {
    let (mut lv, mut ls, mut rv, mut rs) = (0.0, 0.0, 0.0, 0.0);
    for t in terms {
        let y = t.alpha * x + t.beta;
        let (l, r) = (cdf(y), sf(y));
        lv += t.mu * l;
        ls += t.mu.abs() * l;
        rv -= t.mu * r;
        rs += t.mu.abs() * r;
    }
    if ls <= rs {
        Sample::plain(lv, ls)
    } else {
        Sample::plain(rv, rs)
    }
}

/// `integral_u^v sum mu_i Phi(alpha_i x + beta_i) dx` for `alpha_i > 0` and `sum mu_i = 0`.
///
/// With `H` the antiderivative of `Phi` vanishing at minus infinity and
/// `G(y) = H(y) - y`, both `sum (mu_i / alpha_i) H(y_i)` and
/// `sum (mu_i / alpha_i) G(y_i)` are antiderivatives of the sum. The one with
/// the smaller terms is used.
fn phi_sum_integral(terms: &[PhiTerm], u: f64, v: f64) -> f64 {
    // Far from the centers one form decays; across them neither does at both ends.
    let lo = terms.iter().map(|t| -t.beta / t.alpha).fold(f64::INFINITY, f64::min);
    let hi = terms.iter().map(|t| -t.beta / t.alpha).fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    if u < mid && mid < v {
        return phi_sum_integral_one(terms, u, mid) + phi_sum_integral_one(terms, mid, v);
    }
    phi_sum_integral_one(terms, u, v)
}

fn phi_sum_integral_one(terms: &[PhiTerm], u: f64, v: f64) -> f64 {
    let form = |x: f64, f: fn(f64) -> f64| {
        let (mut val, mut scale) = (0.0, 0.0);
        for t in terms {
            let h = f(t.alpha * x + t.beta) / t.alpha;
            val += t.mu * h;
            scale += (t.mu * h).abs();
        }
        (val, scale)
    };
    let (hu, shu) = form(u, cdf_antiderivative);
    let (hv, shv) = form(v, cdf_antiderivative);
    let (gu, sgu) = form(u, upper_antiderivative);
    let (gv, sgv) = form(v, upper_antiderivative);
    if shu + shv <= sgu + sgv {
        hv - hu
    } else {
        gv - gu
    }
}

/// `integral_a^b Phi(alpha x + beta) dx`.
///
/// For `alpha > 0` this is `(H(alpha b + beta) - H(alpha a + beta)) / alpha`;
/// for `alpha < 0`, `Phi(alpha x + beta) = 1 - Phi(-alpha x - beta)` reduces
/// it to the positive case. Infinite ends are allowed where the integral converges.
pub fn phi_piece_integral(alpha: f64, beta: f64, a: f64, b: f64) -> Result<f64> {
    if alpha == 0.0 {
        return Err(Error::AlphaZero);
    }
    if !(a <= b) {
        return Err(Error::InvalidInput(format!("piece [{a}, {b}] is reversed")));
    }
    if alpha < 0.0 {
        let rest = phi_piece_integral(-alpha, -beta, a, b)?;
        if a == f64::NEG_INFINITY || b == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        return Ok((b - a) - rest);
    }
    let (ya, yb) = (alpha * a + beta, alpha * b + beta);
    if ya >= 0.0 {
        // Right tail: H(y) = y + G(y).
        if yb == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        return Ok((b - a) + (upper_antiderivative(yb) - upper_antiderivative(ya)) / alpha);
    }
    let h = |y: f64| if y == f64::NEG_INFINITY { 0.0 } else { cdf_antiderivative(y) };
    Ok((h(yb) - h(ya)) / alpha)
}

/// `E|X|^p` for `X ~ N(mu, sigma^2)`.
///
/// `sigma^p 2^{p/2} Gamma((p+1)/2) / sqrt(pi) M(-p/2, 1/2, -z)`, `z = mu^2 / (2 sigma^2)`,
/// evaluated through Kummer's transformation `M(a, b, -z) = exp(-z) M(b - a, b, z)`,
/// whose series has positive terms. For very large `z` the expansion of
/// `E(|mu| + sigma Z)^p` in powers of `sigma / |mu|` is used.
pub fn gaussian_abs_moment(mu: f64, sigma: f64, p: f64) -> f64 {
    if p == 2.0 {
        return mu * mu + sigma * sigma;
    }
    if sigma == 0.0 {
        return mu.abs().powf(p);
    }
    let z = mu * mu / (2.0 * sigma * sigma);
    if z <= 600.0 {
        let (a, b) = (0.5 * (p + 1.0), 0.5);
        let mut term = (-z).exp();
        let mut sum = term;
        let mut k = 0.0;
        loop {
            term *= (a + k) / (b + k) * z / (k + 1.0);
            sum += term;
            k += 1.0;
            if (k > z && term <= 1e-17 * sum) || k > 5000.0 {
                break;
            }
        }
        sigma.powf(p) * 2f64.powf(0.5 * p) * libm::tgamma(a) / std::f64::consts::PI.sqrt() * sum
    } else {
        // sum_k binom(p, 2k) (2k - 1)!! r^{2k}, r = sigma / |mu|.
        let r2 = (sigma / mu.abs()).powi(2);
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..40 {
            let k = k as f64;
            term *= (p - 2.0 * k + 2.0) * (p - 2.0 * k + 1.0) / ((2.0 * k - 1.0) * 2.0 * k) * (2.0 * k - 1.0) * r2;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        mu.abs().powf(p) * sum
    }
}

/// `E|X|^p` for a mixture density.
pub fn mixture_abs_moment(m: &GaussianMixture, p: f64) -> f64 {
    m.components().iter().map(|c| c.mass() * gaussian_abs_moment(c.mu, c.sigma(), p)).sum()
}

/// `C / L^{p-1}` with `C = (E|X|^p + E|Y|^p) / (p - 1)`: a bound on
/// `integral |F - G|` outside `[-L, L]`.
pub fn tail_bound(m1: &GaussianMixture, m2: &GaussianMixture, p: f64, l: f64) -> f64 {
    moment_constant(m1, m2, p) / l.powf(p - 1.0)
}

fn moment_constant(m1: &GaussianMixture, m2: &GaussianMixture, p: f64) -> f64 {
    (mixture_abs_moment(m1, p) + mixture_abs_moment(m2, p)) / (p - 1.0)
}

fn require_pdf(m: &GaussianMixture, eps: f64, which: &str) -> Result<()> {
    match certify_pdf(m, eps)? {
        Verdict::ValidPdf => Ok(()),
        v => Err(Error::InvalidPdf(format!("{which} mixture: {v:?}"))),
    }
}

/// Levels `[w, Dw, ...]`: `w` with pivot 1 on top of the sequence of the
/// Gaussian mixture `Dw = sum mu_i alpha_i phi(alpha_i x + beta_i)`.
pub fn gaussian_difference_levels(terms: &[PhiTerm]) -> Result<(Vec<GbfLevel>, (f64, f64))> {
    let dw = GaussianMixture::new(
        terms
            .iter()
            .map(|t| GaussianComponent {
                gamma: t.mu * t.alpha * INV_SQRT_2PI,
                mu: -t.beta / t.alpha,
                sigma2: 1.0 / (t.alpha * t.alpha),
            })
            .collect(),
    )?;
    let (a, b) = bounding_interval(&dw);
    let seq = gbf_sequence_on(&dw, a, b, QPath::Determinant)?;
    let t = terms.to_vec();
    let mut top = GbfLevel::new("w", Arc::new(move |x| phi_sum_sample(&t, x)));
    top.pivot = Some(Arc::new(|_| Sample::plain(1.0, 1.0)));
    let mut levels = vec![top];
    levels.extend(seq.levels);
    Ok((levels, (a, b)))
}

/// `W1` between two Gaussian-mixture densities.
///
/// The zeros of `w = F - G` lie inside the bounding interval of `Dw`, outside
/// which `w` is monotone and tends to zero. Piece integrals are exact; the
/// range is cut at `L` with `C / L^{p-1} <= tail_tol`.
pub fn w1_gaussian(m1: &GaussianMixture, m2: &GaussianMixture, p: f64, tail_tol: f64, eps: f64) -> Result<W1Result> {
    if !(p > 1.0) || !(tail_tol > 0.0) {
        return Err(Error::InvalidInput(format!("need p > 1 and tail_tol > 0, got p = {p}, tail_tol = {tail_tol}")));
    }
    require_pdf(m1, eps, "first")?;
    require_pdf(m2, eps, "second")?;
    let c = moment_constant(m1, m2, p);
    let CdfDifference::GaussPhiSum(terms) = CdfDifference::gaussian(m1, m2) else { unreachable!() };
    let mut l = (c / tail_tol).powf(1.0 / (p - 1.0));
    if terms.is_empty() {
        return Ok(W1Result {
            distance: 0.0,
            zeros: vec![],
            pieces: vec![],
            tail_bound: 0.0,
            moment_constant: Some(c),
            p: Some(p),
            half_width: Some(l),
        });
    }
    let (levels, (a, b)) = gaussian_difference_levels(&terms)?;
    let report = backward_scan(&levels, a, b, eps)?;
    let zeros = report.xs();
    l = l.max(a.abs()).max(b.abs());
    let mut cuts = vec![-l];
    cuts.extend(zeros.iter().copied());
    cuts.push(l);
    let pieces: Vec<f64> = cuts.windows(2).map(|w| phi_sum_integral(&terms, w[0], w[1])).collect();
    Ok(W1Result {
        distance: pieces.iter().map(|v| v.abs()).sum(),
        zeros,
        pieces,
        tail_bound: c / l.powf(p - 1.0),
        moment_constant: Some(c),
        p: Some(p),
        half_width: Some(l),
    })
}

/// `W1` between two EPT densities on `[0, inf)`.
///
/// `w = F - G = c_w exp(A_w x) b_w` on the block-diagonal state space with
/// `c_w = (c_1 A_1^{-1}, -c_2 A_2^{-1})`, and
/// `integral_u^v w = c_w A_w^{-1} (exp(A_w v) - exp(A_w u)) b_w`.
pub fn w1_ept(r1: &EptRealization, r2: &EptRealization, eps: f64, scan_end: Option<f64>) -> Result<W1Result> {
    r1.check_density()?;
    r2.check_density()?;
    let w = r1.cdf_complement()?.difference(&r2.cdf_complement()?);
    let cw = solve(&w.a.transpose(), &w.c)?;
    let anti_sample = |x: f64| weighted_sample(&cw, &matrix_exp(&w.a, x), &w.b);
    let anti = |x: f64| anti_sample(x).0;
    let (end, tail_bound) = match scan_end {
        Some(t) => (Some(t), 0.0),
        None => match t_auto(&w) {
            Ok(t) => (Some(t), 0.0),
            Err(Error::TailUnresolved(msg)) => {
                // Nearly equal slow rates: scan until what is left of the
                // integral is below rounding, and report that remainder.
                let floor = NEGLIGIBLE_TAIL * (1.0 + anti_sample(0.0).1);
                let mut t = 1.0;
                while anti_sample(t).1 > floor || anti_sample(2.0 * t).1 > floor {
                    t *= 2.0;
                    if t > 1e12 {
                        return Err(Error::TailUnresolved(msg));
                    }
                }
                log::warn!("{msg}; scanning [0, {t}] with remainder below {floor:e}");
                (Some(t), anti_sample(t).1)
            }
            Err(e) => return Err(e),
        },
    };
    let report = find_roots_ept(&w, eps, end)?;
    let zeros: Vec<f64> = report.xs().into_iter().filter(|&x| x > 0.0).collect();
    let mut cuts = vec![0.0];
    cuts.extend(zeros.iter().copied());
    let mut pieces: Vec<f64> = cuts.windows(2).map(|s| anti(s[1]) - anti(s[0])).collect();
    pieces.push(-anti(*cuts.last().expect("nonempty")));
    Ok(W1Result {
        distance: pieces.iter().map(|v| v.abs()).sum(),
        zeros,
        pieces,
        tail_bound,
        moment_constant: None,
        p: None,
        half_width: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normal(mu: f64) -> GaussianMixture {
        GaussianMixture::from_densities(&[(1.0, mu, 1.0)]).unwrap()
    }

    #[test]
    fn shifted_normals() {
        for m in [0.5, 1.0, 2.0] {
            let r = w1_gaussian(&normal(0.0), &normal(m), 2.0, 1e-10, crate::DEFAULT_EPS).unwrap();
            assert!((r.distance - m).abs() < 1e-9, "{m}: {r:?}");
            assert!(r.zeros.is_empty());
        }
        let r = w1_gaussian(&normal(0.3), &normal(0.3), 2.0, 1e-10, crate::DEFAULT_EPS).unwrap();
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn exponentials() {
        let r = w1_ept(
            &EptRealization::exponential(1.0).unwrap(),
            &EptRealization::exponential(2.0).unwrap(),
            crate::DEFAULT_EPS,
            None,
        )
        .unwrap();
        assert!((r.distance - 0.5).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn piece_integrals() {
        assert!((phi_piece_integral(1.0, 0.0, -40.0, 0.0).unwrap() - INV_SQRT_2PI).abs() < 1e-15);
        let v = phi_piece_integral(1.0, 0.0, 0.0, 10.0).unwrap();
        assert!((v - (10.0 - INV_SQRT_2PI)).abs() < 1e-12);
        let (al, be, a, b) = (-0.7, 0.4, -1.0, 2.5);
        let h = 1e-6;
        let d = (phi_piece_integral(al, be, a, b + h).unwrap() - phi_piece_integral(al, be, a, b - h).unwrap()) / (2.0 * h);
        assert!((d - cdf(al * b + be)).abs() < 1e-8);
        assert_eq!(phi_piece_integral(0.0, 1.0, 0.0, 1.0), Err(Error::AlphaZero));
    }

    #[test]
    fn abs_moments() {
        // E|Z| = sqrt(2/pi), E|Z|^3 = 2 sqrt(2/pi).
        let s = (2.0 / std::f64::consts::PI).sqrt();
        assert!((gaussian_abs_moment(0.0, 1.0, 1.0) - s).abs() < 1e-14);
        assert!((gaussian_abs_moment(0.0, 1.0, 3.0) - 2.0 * s).abs() < 1e-13);
        // E X^4 = mu^4 + 6 mu^2 s^2 + 3 s^4 for an even power.
        let (mu, sg): (f64, f64) = (1.3, 0.7);
        let want = mu.powi(4) + 6.0 * mu * mu * sg * sg + 3.0 * sg.powi(4);
        assert!((gaussian_abs_moment(mu, sg, 4.0) - want).abs() < 1e-12 * want);
        let (mu, sg): (f64, f64) = (30.0, 0.5);
        let want = mu.powi(4) + 6.0 * mu * mu * sg * sg + 3.0 * sg.powi(4);
        assert!((gaussian_abs_moment(mu, sg, 4.0) - want).abs() < 1e-12 * want);
        assert!((tail_bound(&normal(0.0), &GaussianMixture::from_densities(&[(1.0, 0.0, 1.0)]).unwrap(), 2.0, 10.0) - 0.2).abs() < 1e-15);
    }
}
