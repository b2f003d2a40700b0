use super::{GaussianComponent, GaussianMixture};

/// Interval `[a, b]` outside which `f` has the constant nonzero sign of the
/// dominant component on that side.
///
/// Beyond `b` every other kernel is at most `1/(2n)` of the kernel with the
/// largest variance (ties: largest mean); `q_dom - q_i <= ln(|gamma_dom| / (2n |gamma_i|))`
/// is a quadratic or linear inequality solved in closed form. The left end is
/// symmetric.
pub fn bounding_interval(mix: &GaussianMixture) -> (f64, f64) {
    let comps = mix.components();
    if comps.len() == 1 {
        let mu = comps[0].mu;
        return (mu - 1.0, mu + 1.0);
    }
    let b = side(mix, true);
    let a = side(mix, false);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if b - a < 1e-9 * a.abs().max(b.abs()).max(1.0) {
        (a - 1.0, b + 1.0)
    } else {
        (a, b)
    }
}

fn side(mix: &GaussianMixture, positive: bool) -> f64 {
    let comps = mix.components();
    let k = comps.len() as f64;
    let d = *mix.dominant(positive);
    let mut edge = d.mu;
    let mut first = true;
    for c in comps.iter().filter(|c| !(c.mu == d.mu && c.sigma2 == d.sigma2)) {
        let l = (d.gamma.abs() / (2.0 * k * c.gamma.abs())).ln();
        if let Some(x) = threshold(&d, c, l, positive) {
            edge = if first {
                x
            } else if positive {
                edge.max(x)
            } else {
                edge.min(x)
            };
            first = false;
        }
    }
    edge
}

/// Outermost solution of `q_d(x) - q_i(x) = l` on the requested side, or
/// `None` when the inequality `q_d - q_i <= l` holds on the whole line.
fn threshold(d: &GaussianComponent, i: &GaussianComponent, l: f64, positive: bool) -> Option<f64> {
    let a = 0.5 / d.sigma2 - 0.5 / i.sigma2;
    let b = i.mu / i.sigma2 - d.mu / d.sigma2;
    let c = 0.5 * d.mu * d.mu / d.sigma2 - 0.5 * i.mu * i.mu / i.sigma2 - l;
    if a == 0.0 {
        return Some(-c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    // Stable pair of roots.
    let s = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = if s == 0.0 { (0.0, 0.0) } else { (s / a, c / s) };
    Some(if positive { r1.max(r2) } else { r1.min(r2) })
}
