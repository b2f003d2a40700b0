//! Mixture files, family dispatch and versioned JSON reports.

use serde::{Deserialize, Serialize};

use crate::certify::Verdict;
use crate::error::Result;
use crate::gbf::{GbfLevel, RootReport};

mod spec;

pub use spec::{parse_spec, Family, MixtureSpec, RunOptions, SpecError, WeightKind};

/// Schema tag carried by every JSON document.
pub const SCHEMA: &str = "gbfkit/1";

/// Output of `roots`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootsDoc {
    pub schema: String,
    pub family: String,
    pub eps: f64,
    #[serde(flatten)]
    pub report: RootReport,
}

/// Output of `certify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyDoc {
    pub schema: String,
    pub family: String,
    pub verdict: Verdict,
    pub interval: [f64; 2],
}

/// Output of `wasserstein`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WassersteinDoc {
    pub schema: String,
    pub family: String,
    pub w1: f64,
    pub zeros: Vec<f64>,
    pub tail_bound: f64,
    pub pieces: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub half_width: Option<f64>,
}

/// Sign-changing zeros of the mixture in `spec`.
pub fn run_roots(spec: &MixtureSpec, eps: f64, scan_end: Option<f64>) -> Result<RootReport> {
    let scan_end = scan_end.or(spec.options.scan_end);
    match &spec.family {
        Family::Gaussian(m) => crate::gaussmix::find_roots(m, eps),
        Family::Pgm(s) => crate::pgm::find_roots_pgm(s, eps),
        Family::Ept(r) | Family::Erlang { realization: r, .. } => crate::ept::find_roots_ept(r, eps, scan_end),
    }
}

/// Verdict together with the interval that was scanned.
pub fn run_certify(spec: &MixtureSpec, eps: f64, scan_end: Option<f64>) -> Result<(Verdict, [f64; 2])> {
    let report = run_roots(spec, eps, scan_end)?;
    let mass = match &spec.family {
        Family::Gaussian(m) => Some(m.mass()),
        Family::Pgm(_) => None,
        Family::Ept(r) | Family::Erlang { realization: r, .. } => r.mass().ok(),
    };
    Ok((Verdict::from_report(&report, mass), report.interval))
}

/// Levels of the family's sequence, with the interval they were built for.
/// For EPT functions the interval is `[max(lo, 0), hi]`.
pub fn levels_for(spec: &MixtureSpec, lo: f64, hi: f64) -> Result<(Vec<GbfLevel>, (f64, f64))> {
    match &spec.family {
        Family::Gaussian(m) => {
            let s = crate::gaussmix::gbf_sequence(m)?;
            Ok((s.levels, s.interval))
        }
        Family::Pgm(p) => {
            let s = crate::pgm::gbf_sequence_wronskian(p)?;
            Ok((s.levels, s.interval))
        }
        Family::Ept(r) | Family::Erlang { realization: r, .. } => {
            let fac = crate::ept::char_factorize(&r.a)?;
            let a = lo.max(0.0);
            Ok((crate::ept::gbf_sequence_ept(r, &fac, a, hi)?, (a, hi)))
        }
    }
}

pub fn roots_doc(spec: &MixtureSpec, eps: f64, report: RootReport) -> RootsDoc {
    RootsDoc { schema: SCHEMA.into(), family: spec.family.name().into(), eps, report }
}

/// W1 between two mixtures of the same kind: both Gaussian, or both EPT
/// (an Erlang mixture counts as EPT).
pub fn run_wasserstein(
    a: &MixtureSpec,
    b: &MixtureSpec,
    p: f64,
    tail_tol: f64,
    eps: f64,
    scan_end: Option<f64>,
) -> Result<WassersteinDoc> {
    let (family, r) = match (&a.family, &b.family) {
        (Family::Gaussian(m1), Family::Gaussian(m2)) => {
            ("gaussian", crate::wasserstein::w1_gaussian(m1, m2, p, tail_tol, eps)?)
        }
        (fa, fb) => match (fa.realization(), fb.realization()) {
            (Some(r1), Some(r2)) => ("ept", crate::wasserstein::w1_ept(r1, r2, eps, scan_end)?),
            _ => {
                return Err(crate::Error::InvalidInput(format!(
                    "W1 needs two Gaussian or two EPT mixtures, got {} and {}",
                    fa.name(),
                    fb.name()
                )))
            }
        },
    };
    Ok(WassersteinDoc {
        schema: SCHEMA.into(),
        family: family.into(),
        w1: r.distance,
        zeros: r.zeros,
        tail_bound: r.tail_bound,
        pieces: r.pieces,
        p: r.p,
        half_width: r.half_width,
    })
}
