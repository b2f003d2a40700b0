use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GbfLevel;
use crate::numeric::EPS;

/// One finite-difference evaluation of `D(psi_i / rho) = psi_{i+1} / (rho g)`.
///
/// All quantities are expressed relative to `exp(log_factor of psi_i / rho at x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub x: f64,
    pub finite_difference: f64,
    pub exact: f64,
    /// `|exact|` plus the term-magnitude scale of the right-hand side.
    pub magnitude: f64,
    /// Rounding resolution of the central difference.
    pub fd_floor: f64,
}

impl IdentityCheck {
    pub fn relative_error(&self) -> f64 {
        let d = ((self.finite_difference - self.exact).abs() - self.fd_floor).max(0.0);
        if d == 0.0 {
            0.0
        } else {
            d / self.magnitude
        }
    }
}

/// Central difference (five-point, step `h`) of `lower / rho` at `x`, against
/// `upper / (rho g)`, where `rho` and `g` are the pivot and gauge of `lower`.
pub fn check_identity(lower: &GbfLevel, upper: Option<&GbfLevel>, x: f64, h: f64) -> IdentityCheck {
    let pivot = lower.pivot.as_ref().expect("level has a pivot");
    let quotient = |t: f64| {
        let (s, r) = ((lower.eval)(t), pivot(t));
        (s.value / r.value, s.log_factor - r.log_factor)
    };
    let (_, reference) = quotient(x);
    let at = |t: f64| {
        let (v, lf) = quotient(t);
        v * (lf - reference).exp()
    };
    // Five-point stencil: its truncation error stays small where the
    // exponents are steep, far out on wide intervals.
    let fd = (8.0 * (at(x + h) - at(x - h)) - (at(x + 2.0 * h) - at(x - 2.0 * h))) / (12.0 * h);
    // Rounding floor of the central difference: each quotient carries a
    // relative error of a few ulps of its term scale, plus the absolute
    // error of its exponents, which grows with their size.
    let quotient_error = |t: f64| {
        let (s, r) = ((lower.eval)(t), pivot(t));
        let ulps = 8.0 + 4.0 * (s.log_factor.abs() + r.log_factor.abs());
        ulps * EPS * s.scale / r.value.abs() * (s.log_factor - r.log_factor - reference).exp()
    };
    let fd_floor = (8.0 * (quotient_error(x + h) + quotient_error(x - h))
        + quotient_error(x + 2.0 * h)
        + quotient_error(x - 2.0 * h))
        / (12.0 * h);

    let (exact, magnitude) = match upper {
        None => (0.0, 0.0),
        Some(up) => {
            let s = (up.eval)(x);
            let r = pivot(x);
            let (g, glf) = match &lower.gauge {
                Some(g) => {
                    let gs = g(x);
                    (gs.value, gs.log_factor)
                }
                None => (1.0, 0.0),
            };
            let factor = (s.log_factor - r.log_factor - glf - reference).exp();
            let den = r.value * g;
            let exact = s.value / den * factor;
            (exact, exact.abs() + s.scale / den.abs() * factor)
        }
    };
    // An identically vanishing right-hand side is compared against the scale of the quotient.
    let magnitude = if upper.is_none() {
        let (v, _) = quotient(x);
        let s = (lower.eval)(x).scale / pivot(x).value.abs();
        v.abs().max(s)
    } else {
        magnitude
    };
    IdentityCheck { x, finite_difference: fd, exact, magnitude, fd_floor }
}

/// Random points of `[a, b]` at distance more than `min_dist` from every
/// pivot zero, pivot pole and pole of the two levels.
pub fn identity_sample_points(
    lower: &GbfLevel,
    upper: Option<&GbfLevel>,
    a: f64,
    b: f64,
    count: usize,
    min_dist: f64,
    seed: u64,
) -> Vec<f64> {
    let mut avoid: Vec<f64> = lower
        .pivot_zeros
        .iter()
        .chain(&lower.pivot_poles)
        .chain(&lower.poles)
        .copied()
        .collect();
    if let Some(up) = upper {
        avoid.extend(up.poles.iter().chain(&up.pivot_zeros).chain(&up.pivot_poles));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 100 * count {
        tries += 1;
        let x = rng.gen_range(a + min_dist..b - min_dist);
        if avoid.iter().all(|p| (p - x).abs() > min_dist) {
            out.push(x);
        }
    }
    out
}
