use nalgebra::{Complex, DMatrix};

use super::poly::Polynomial;
use super::{sign_threshold, EPS};

/// A real root located by [`isolate_real_roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub x: f64,
    /// Odd multiplicity (the polynomial changes sign here).
    pub sign_changing: bool,
}

/// Result of a bracketed refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketed {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

impl Bracketed {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

const MAX_ITER: usize = 1100;

/// Ridders' method on a bracket with `flo * fhi < 0`.
///
/// The bracket is kept at every step; a Ridders abscissa that lands outside it
/// is replaced by the midpoint. Stops when the bracket is narrower than
/// `eps * max(|lo|, |hi|)` or no floating-point number lies strictly inside.
pub fn ridders<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
    mut fhi: f64,
    eps: f64,
) -> Bracketed {
    debug_assert!(flo * fhi < 0.0);
    let mut it = 0;
    while it < MAX_ITER {
        let tol = eps * lo.abs().max(hi.abs());
        let m = 0.5 * (lo + hi);
        if hi - lo <= tol || m <= lo || m >= hi {
            break;
        }
        it += 1;
        let fm = f(m);
        if fm == 0.0 {
            return Bracketed { root: m, lo: m, hi: m, iterations: it };
        }
        let s = (fm * fm - flo * fhi).sqrt();
        let mut x = m + (m - lo) * (flo - fhi).signum() * fm / s;
        if !(x > lo && x < hi) || !x.is_finite() {
            x = m;
        }
        let fx = if x == m { fm } else { f(x) };
        if fx == 0.0 {
            return Bracketed { root: x, lo: x, hi: x, iterations: it };
        }
        let mut pts = [(lo, flo), (m, fm), (x, fx), (hi, fhi)];
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best: Option<usize> = None;
        for i in 0..3 {
            let (a, fa) = pts[i];
            let (b, fb) = pts[i + 1];
            if b > a && fa.signum() != fb.signum() && best.is_none_or(|j| b - a < pts[j + 1].0 - pts[j].0) {
                best = Some(i);
            }
        }
        let i = best.expect("sign change is preserved");
        (lo, flo) = pts[i];
        (hi, fhi) = pts[i + 1];
    }
    let root = if flo.abs() <= fhi.abs() { lo } else { hi };
    Bracketed { root, lo, hi, iterations: it }
}

/// All distinct real roots of `p` in the open interval `(a, b)`, in increasing order.
///
/// The interval is split at the real critical points of `p` (found
/// recursively), so `p` is monotone on each piece and every sign change is
/// bracketed. A critical point where `|p|` is below the sign threshold is a
/// multiple root; its parity is read from the signs on either side.
pub fn isolate_real_roots(p: &Polynomial, a: f64, b: f64) -> Vec<RealRoot> {
    assert!(a < b, "empty interval");
    assert!(!p.is_zero(), "zero polynomial has no isolated roots");
    isolate(p, a, b)
}

fn isolate(p: &Polynomial, a: f64, b: f64) -> Vec<RealRoot> {
    match p.degree() {
        0 => return Vec::new(),
        1 => {
            let x = -p.coeff(0) / p.coeff(1);
            return if x > a && x < b {
                vec![RealRoot { x, sign_changing: true }]
            } else {
                Vec::new()
            };
        }
        _ => {}
    }
    let crit = isolate(&p.derivative(), a, b);
    let zeta = sign_threshold();
    let delta = |x: f64| 1e3 * EPS * x.abs().max((b - a) * 1e-3).max(1e-300);
    let sign_at = |x: f64| {
        let (v, s) = p.eval_with_scale(x);
        if v.abs() <= zeta * s {
            0.0
        } else {
            v.signum()
        }
    };

    // Sign just beside x, moving outward until the value clears the threshold.
    let probe = |x: f64, dir: f64, cap: f64| {
        let mut d = delta(x);
        loop {
            let s = sign_at(x + dir * d);
            if s != 0.0 || 8.0 * d > cap {
                return (x + dir * d, if s != 0.0 { s } else { p.eval(x + dir * d).signum() });
            }
            d *= 8.0;
        }
    };
    let end_sign = |x: f64, dir: f64| {
        let s = sign_at(x);
        if s != 0.0 {
            s
        } else {
            probe(x, dir, 0.5 * (b - a)).1
        }
    };

    // (abscissa, sign) samples; a multiple-root candidate is replaced by probes
    // on both sides around a NaN separator.
    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut found: Vec<RealRoot> = Vec::new();
    samples.push((a, end_sign(a, 1.0)));
    for c in &crit {
        let s = sign_at(c.x);
        if s != 0.0 {
            samples.push((c.x, s));
            continue;
        }
        let cap = 1e-4 * (b - a);
        let (xl, sl) = probe(c.x, -1.0, cap);
        let (xr, sr) = probe(c.x, 1.0, cap);
        found.push(RealRoot { x: c.x, sign_changing: sl != sr && sl != 0.0 && sr != 0.0 });
        samples.push((xl, sl));
        samples.push((f64::NAN, 0.0));
        samples.push((xr, sr));
    }
    samples.push((b, end_sign(b, -1.0)));

    for w in samples.windows(2) {
        let (x0, s0) = w[0];
        let (x1, s1) = w[1];
        if x0.is_nan() || x1.is_nan() || s0 == 0.0 || s1 == 0.0 || s0 == s1 || x1 <= x0 {
            continue;
        }
        let end = |x: f64, s: f64| p.eval(x).abs().max(f64::MIN_POSITIVE).copysign(s);
        let r = ridders(|x| p.eval(x), x0, x1, end(x0, s0), end(x1, s1), EPS);
        found.push(RealRoot { x: r.root, sign_changing: true });
    }
    found.sort_by(|u, v| u.x.total_cmp(&v.x));
    found.dedup_by(|u, v| (u.x - v.x).abs() <= 1e3 * EPS * (b - a));
    found
}

/// Complex roots from the eigenvalues of the companion matrix.
pub fn complex_roots(p: &Polynomial) -> Vec<Complex<f64>> {
    let n = p.degree();
    if n == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let mut c = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        c[(i, n - 1)] = -p.coeff(i) / lead;
    }
    c.complex_eigenvalues().iter().copied().collect()
}
