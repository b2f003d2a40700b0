use std::sync::Arc;

use super::{bounding_interval, rational_level, real_roots_x, PgmSequence, PgmSum};
use crate::error::{Error, Result};
use crate::gbf::{GbfLevel, Sample};
use crate::numeric::{Polynomial, RationalFunction, EXACT_DIV_TOL};

/// Sequence built by repeated derivation instead of Wronskians.
///
/// With `h_{0;j} = h_j` and
/// `h_{i;j} = D h_{i-1;j} - h_{i-1;j} D h_{i-1;i} / h_{i-1;i}`, every entry of
/// row `i` is `(N_{i;j} / D_i) exp(q_j)` over a common denominator, and
/// `D_i = N_{i-1;i}`. For `N = N_{i-1;j}`, `M = N_{i-1;i}`,
/// `N_{i;j} = (N' M - N M' + (q_j' - q_i') N M) / D_{i-1}`, an exact division.
///
/// Levels are evaluated from these coefficients, whose rounding error builds
/// up over the divisions; past four terms the Wronskian path is more accurate.
pub fn gbf_sequence_iterative(sum: &PgmSum) -> Result<PgmSequence> {
    let (a, b) = bounding_interval(sum)?;
    let (c, s) = (0.5 * (a + b), 0.5 * (b - a));
    let terms = sum.terms();
    let n = terms.len();
    let dq: Vec<Polynomial> = terms.iter().map(|t| t.exponent_derivative().compose_affine(c, s)).collect();

    let mut dens = vec![Polynomial::one()];
    let mut nums: Vec<Vec<Polynomial>> = vec![terms.iter().map(|t| t.p.compose_affine(c, s)).collect()];
    for i in 1..n {
        let prev = &nums[i - 1];
        let m = &prev[0];
        if m.is_zero() {
            return Err(Error::LinearlyDependentTerms { order: i });
        }
        let dm = m.derivative().scale(1.0 / s);
        let row = prev[1..]
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let j = i + k;
                let l = &r.derivative().scale(1.0 / s) * m;
                let u = r * &dm;
                let v = &(r * m) * &(&dq[j] - &dq[i - 1]);
                let scale = l.max_norm().max(u.max_norm()).max(v.max_norm());
                let raw = &(&l - &u) + &v;
                if raw.is_zero() {
                    Ok(raw)
                } else {
                    raw.div_exact_scaled(&dens[i - 1], EXACT_DIV_TOL, scale)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        dens.push(m.clone());
        nums.push(row);
    }
    if nums[n - 1][0].is_zero() {
        return Err(Error::LinearlyDependentTerms { order: n });
    }
    let rows: Vec<Vec<RationalFunction>> = nums
        .into_iter()
        .zip(&dens)
        .map(|(row, d)| row.into_iter().map(|p| RationalFunction::new(p, d.clone())).collect())
        .collect();

    let mut levels = Vec::with_capacity(n);
    for m in 0..n {
        let eval = if m == 0 {
            let f = sum.clone();
            Arc::new(move |x| f.sample(x)) as Arc<dyn Fn(f64) -> Sample + Send + Sync>
        } else {
            rational_level(
                rows[m].iter().zip(&terms[m..]).map(|(r, h)| (r.num.clone(), r.den.clone(), h.clone())).collect(),
                c,
                s,
            )
        };
        let rp = rows[m][0].clone();
        let h = terms[m].clone();
        let pivot: Arc<dyn Fn(f64) -> Sample + Send + Sync> = Arc::new(move |x| {
            let v = rp.eval((x - c) / s);
            Sample { value: v, scale: v.abs(), log_factor: h.exponent(x) }
        });
        let mut level = GbfLevel::new(format!("psi_{m}"), eval);
        level.pivot = Some(pivot);
        level.pivot_zeros = real_roots_x(&rows[m][0].num, c, s);
        level.pivot_poles = real_roots_x(&rows[m][0].den, c, s);
        if m > 0 {
            level.poles = real_roots_x(&dens[m], c, s);
        }
        levels.push(level.clip(a, b));
    }
    Ok(PgmSequence { levels, interval: (a, b), center: c, width: s, rationals: rows })
}
