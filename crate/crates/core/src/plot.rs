//! CSV curves of every level of a sequence.

use std::fmt::Write;

use crate::gbf::GbfLevel;

/// Abscissae `lo, lo + step, ...` up to `hi`.
pub fn sample_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && hi >= lo, "invalid sampling range");
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// `level,x,value,sign` rows, one block per level from the top level down
/// to `psi_0 = f`. Floats use the shortest representation that round-trips,
/// switching to exponent notation for very small or large magnitudes.
pub fn plot_csv(levels: &[GbfLevel], lo: f64, hi: f64, step: f64) -> String {
    let xs = sample_points(lo, hi, step);
    let mut out = String::from("level,x,value,sign\n");
    for level in levels.iter().rev() {
        for &x in &xs {
            let s = level.eval(x);
            writeln!(out, "{},{:?},{:?},{}", level.label, x, s.real(), s.sign()).expect("write to string");
        }
    }
    out
}

/// Number of sign changes in the `sign` column of one level's block,
/// ignoring zero entries.
pub fn sign_changes(csv: &str, label: &str) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for line in csv.lines().skip(1) {
        let mut f = line.split(',');
        if f.next() != Some(label) {
            continue;
        }
        let s: i8 = f.nth(2).and_then(|v| v.parse().ok()).unwrap_or(0);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}
