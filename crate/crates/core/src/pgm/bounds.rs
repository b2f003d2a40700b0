use super::{PgmSum, PgmTerm};
use crate::error::{Error, Result};

/// Interval outside which `f` keeps the sign of its dominant term.
///
/// On each side every other term is bounded by `1/(2n)` of the dominant one.
/// With `R` the largest Cauchy root bound of the polynomials, the log-ratio
/// `g = ln|p_i| - ln|p_d| + q_i - q_d + ln(2n)` has derivative at most
/// `(q_i - q_d)' + (deg p_i + deg p_d) / (x - R)` for `x > R`, a decreasing
/// bound. A point where both `g <= 0` and the derivative bound is negative
/// certifies the whole half-line; the smallest such point is bracketed by
/// doubling and then bisected.
pub fn bounding_interval(sum: &PgmSum) -> Result<(f64, f64)> {
    let terms = sum.terms();
    let r = terms.iter().map(|t| t.p.root_bound()).fold(0.0, f64::max);
    if terms.len() == 1 {
        return Ok((-r - 1.0, r + 1.0));
    }
    let b = side(terms, r)?;
    let reflected: Vec<PgmTerm> = terms.iter().map(PgmTerm::reflect).collect();
    let a = -side(&reflected, r)?;
    Ok(if a < b { (a, b) } else { (b - 1.0, a + 1.0) })
}

fn side(terms: &[PgmTerm], r: f64) -> Result<f64> {
    let d = terms
        .iter()
        .max_by(|a, b| a.q[2].total_cmp(&b.q[2]).then(a.q[1].total_cmp(&b.q[1])))
        .expect("nonempty sum");
    let k2 = (2.0 * terms.len() as f64).ln();
    let mut edge = f64::NEG_INFINITY;
    for t in terms.iter().filter(|t| !std::ptr::eq(*t, d)) {
        let dq = |x: f64| (t.q[1] - d.q[1]) + 2.0 * (t.q[2] - d.q[2]) * x;
        let degs = (t.p.degree() + d.p.degree()) as f64;
        let ok = |x: f64| {
            let g = t.p.eval(x).abs().ln() - d.p.eval(x).abs().ln() + t.exponent(x) - d.exponent(x) + k2;
            g <= 0.0 && dq(x) + degs / (x - r) < 0.0
        };
        let mut lo = r + 0.5;
        let mut step = 1.0;
        let mut hi = lo + step;
        while !ok(hi) {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
            if step > 1e150 {
                return Err(Error::TailUnresolved("no dominance point found for a term".into()));
            }
        }
        if ok(lo) {
            hi = lo;
        } else {
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                if ok(m) {
                    hi = m;
                } else {
                    lo = m;
                }
            }
        }
        edge = edge.max(hi);
    }
    Ok(edge)
}
