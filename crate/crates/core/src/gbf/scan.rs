use super::refine::refine_sample;
use super::{Evaluator, GbfLevel, NearZeroEvent, Root, RootReport, Sample, SimpleGrid};
use crate::error::Result;
use crate::numeric::{sign_threshold, EPS};

/// Per-level outcome of a backward scan.
#[derive(Debug, Clone)]
pub struct LevelScan {
    pub label: String,
    pub grid: Vec<f64>,
    pub report: RootReport,
}

/// All levels of a backward scan, ordered from `psi_0` upwards.
#[derive(Debug, Clone)]
pub struct Scan {
    pub levels: Vec<LevelScan>,
}

impl Scan {
    pub fn into_report(mut self) -> RootReport {
        let mut report = self.levels.remove(0).report;
        for l in &self.levels {
            report.warnings.extend(l.report.warnings.iter().map(|w| format!("{}: {w}", l.label)));
        }
        report
    }
}

struct Probe {
    x: f64,
    sign: i8,
}

fn probe(f: &Evaluator, x: f64, dir: f64, d0: f64, cap: f64, events: &mut Vec<NearZeroEvent>) -> Probe {
    let mut d = d0;
    let mut s = f(x + dir * d);
    if s.is_negligible() {
        events.push(NearZeroEvent { x, value: s.value, scale: s.scale });
        while s.is_negligible() && 8.0 * d <= cap {
            d *= 8.0;
            s = f(x + dir * d);
        }
        log::debug!("probe beside {x} widened to {d:e}");
    }
    let sign = match s.sign() {
        0 if s.value > 0.0 => 1,
        0 if s.value < 0.0 => -1,
        v => v,
    };
    Probe { x: x + dir * d, sign }
}

fn sign_char(s: i8) -> char {
    if s < 0 {
        '-'
    } else {
        '+'
    }
}

/// Sign-changing zeros of `f` on a simple grid.
///
/// `f` is probed just inside both ends of every grid interval. A sign
/// difference within an interval, or across a grid point that is not in
/// `poles`, is bracketed and refined.
pub fn roots_from_grid(f: &Evaluator, grid: &SimpleGrid, poles: &[f64], eps: f64) -> RootReport {
    let (a, b) = (grid.a, grid.b);
    let nodes = grid.nodes();
    let width = b - a;
    let delta = eps.max(1e3 * EPS * width);
    let pole_tol = 2.0 * sign_threshold() * width;
    let is_pole = |x: f64| poles.iter().any(|p| (p - x).abs() <= pole_tol);

    let mut events = Vec::new();
    let mut warnings = Vec::new();
    for (x, name) in [(a, "a"), (b, "b")] {
        let s: Sample = f(x);
        if s.value.is_finite() && s.is_negligible() && !is_pole(x) {
            warnings.push(format!("function vanishes at endpoint {name} = {x}"));
        }
    }

    let pieces: Vec<(Probe, Probe)> = nodes
        .windows(2)
        .map(|w| {
            let len = w[1] - w[0];
            let d = delta.min(0.25 * len);
            let l = probe(f, w[0], 1.0, d, 0.5 * len, &mut events);
            let r = probe(f, w[1], -1.0, d, 0.5 * len, &mut events);
            (l, r)
        })
        .collect();

    let mut roots: Vec<Root> = Vec::new();
    let refine = |lo: f64, hi: f64, roots: &mut Vec<Root>, warnings: &mut Vec<String>| {
        match refine_sample(f, lo, hi, eps) {
            Ok(r) => roots.push(r),
            Err(e) => warnings.push(format!("bracket [{lo}, {hi}] lost its sign change: {e}")),
        }
    };
    for (k, (l, r)) in pieces.iter().enumerate() {
        if k > 0 {
            let prev = &pieces[k - 1].1;
            if prev.sign != l.sign && !is_pole(nodes[k]) {
                refine(prev.x, l.x, &mut roots, &mut warnings);
            }
        }
        if l.sign != r.sign {
            refine(l.x, r.x, &mut roots, &mut warnings);
        }
    }

    let mut pattern = String::new();
    let mut s = pieces[0].0.sign;
    pattern.push(sign_char(s));
    for _ in &roots {
        s = -s;
        pattern.push(sign_char(s));
    }
    if !poles.iter().any(|p| *p > a && *p < b) && pieces.last().map(|p| p.1.sign) != Some(s) {
        warnings.push("sign pattern does not match the sign at the right endpoint".into());
    }

    RootReport {
        interval: [a, b],
        roots,
        sign_pattern: pattern,
        near_zero_grid_events: events,
        warnings,
    }
}

/// Runs the backward scan and returns the report for `psi_0`.
pub fn backward_scan(levels: &[GbfLevel], a: f64, b: f64, eps: f64) -> Result<RootReport> {
    Ok(backward_scan_detailed(levels, a, b, eps)?.into_report())
}

/// Backward scan from the last nonzero level down to `psi_0`.
///
/// The grid of level `i` holds the zeros and poles of its pivot, the roots
/// and poles found at level `i + 1`, its own poles, and every grid point of
/// the levels above.
pub fn backward_scan_detailed(levels: &[GbfLevel], a: f64, b: f64, eps: f64) -> Result<Scan> {
    assert!(!levels.is_empty(), "a sequence has at least one level");
    let mut acc: Vec<f64> = Vec::new();
    let mut above: Vec<f64> = Vec::new();
    let mut out: Vec<LevelScan> = Vec::with_capacity(levels.len());
    for level in levels.iter().rev() {
        let mut pts = acc.clone();
        pts.extend_from_slice(&level.pivot_zeros);
        pts.extend_from_slice(&level.pivot_poles);
        pts.extend_from_slice(&level.poles);
        pts.extend_from_slice(&above);
        let grid = SimpleGrid::new(a, b, pts);
        let report = roots_from_grid(&level.eval, &grid, &level.poles, eps);
        log::debug!("{}: {} grid points, {} roots", level.label, grid.points.len(), report.roots.len());
        above = report.xs();
        above.extend_from_slice(&level.poles);
        acc = grid.points.clone();
        out.push(LevelScan { label: level.label.clone(), grid: grid.points, report });
    }
    out.reverse();
    Ok(Scan { levels: out })
}
