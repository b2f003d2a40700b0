//! Nonnegativity and normalization verdicts.

use serde::{Deserialize, Serialize};

use crate::gbf::RootReport;

/// Tolerance on the total mass of a density.
pub const MASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Nonnegative with unit mass.
    ValidPdf,
    /// Nonnegative, with a total mass different from one.
    NonnegativeButUnnormalized { mass: f64 },
    /// Nonnegative; no mass is computed for this family.
    Nonnegative,
    SignChanging { roots: Vec<f64> },
    NonpositiveEverywhere,
}

impl Verdict {
    /// Verdict from the roots of `f` on an interval outside which `f` has
    /// the sign recorded in the report. `mass` is `None` when the family
    /// makes no normalization claim.
    pub fn from_report(report: &RootReport, mass: Option<f64>) -> Verdict {
        if !report.roots.is_empty() {
            return Verdict::SignChanging { roots: report.xs() };
        }
        if report.sign_pattern.starts_with('-') {
            return Verdict::NonpositiveEverywhere;
        }
        match mass {
            None => Verdict::Nonnegative,
            Some(m) if (m - 1.0).abs() <= MASS_TOL => Verdict::ValidPdf,
            Some(m) => Verdict::NonnegativeButUnnormalized { mass: m },
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(
            self,
            Verdict::ValidPdf | Verdict::Nonnegative | Verdict::NonnegativeButUnnormalized { .. }
        )
    }
}
