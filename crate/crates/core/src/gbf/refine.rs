use super::{Evaluator, Root};
use crate::error::{Error, Result};
use crate::numeric::ridders;

/// Refines a sign change of `f` on `(lo, hi)` with Ridders' method.
pub fn refine_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, eps: f64) -> Result<Root> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(lo < hi) || !(flo * fhi < 0.0) {
        return Err(Error::NoSignChange { lo, hi, flo, fhi });
    }
    let r = ridders(f, lo, hi, flo, fhi, eps);
    Ok(Root { x: r.root, bracket: [r.lo, r.hi], tol: r.width() })
}

/// Spread of exponential factors inside a bracket that [`refine_sample`]
/// reduces by sign bisection before switching to Ridders' method.
const LOG_SPREAD: f64 = 300.0;

/// As [`refine_root`] for a level evaluator. The bracket is first bisected on
/// signs until the exponential factors at both ends and at the midpoint lie
/// within [`LOG_SPREAD`] of each other; the values are then taken relative to
/// the factor at `lo` so that tiny values keep their precision.
pub fn refine_sample(f: &Evaluator, mut lo: f64, mut hi: f64, eps: f64) -> Result<Root> {
    let (mut sl, sh) = (f(lo), f(hi));
    if !(lo < hi) || sl.value.signum() * sh.value.signum() >= 0.0 || sl.value == 0.0 || sh.value == 0.0 {
        return Err(Error::NoSignChange { lo, hi, flo: sl.real(), fhi: sh.real() });
    }
    let mut lf_hi = sh.log_factor;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let sm = f(mid);
        let spread = (sl.log_factor - lf_hi).abs().max((sl.log_factor - sm.log_factor).abs());
        if spread <= LOG_SPREAD || mid <= lo || mid >= hi {
            break;
        }
        if sm.value == 0.0 {
            return Ok(Root { x: mid, bracket: [mid, mid], tol: 0.0 });
        }
        if sm.value.signum() == sl.value.signum() {
            lo = mid;
            sl = sm;
        } else {
            hi = mid;
            lf_hi = sm.log_factor;
        }
    }
    let reference = sl.log_factor;
    refine_root(|x| f(x).relative_to(reference), lo, hi, eps)
}
