use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ept::{erlang_mixture, EptRealization, ErlangTerm};
use crate::error::Error;
use crate::gaussmix::{GaussianComponent, GaussianMixture};
use crate::numeric::Polynomial;
use crate::pgm::{PgmSum, PgmTerm};

/// Validation failure with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for SpecError {}

fn err(path: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError { path: path.into(), message: message.into() }
}

/// How Gaussian weights are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    /// `gamma exp(-(x - mu)^2 / (2 sigma2))`
    #[default]
    Kernel,
    /// `w N(mu, sigma2)`
    Density,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianComponentIn {
    #[serde(alias = "gamma")]
    w: f64,
    mu: f64,
    sigma2: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianIn {
    components: Vec<GaussianComponentIn>,
    #[serde(default)]
    weights: WeightKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PgmTermIn {
    p: Vec<f64>,
    q: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PgmIn {
    terms: Vec<PgmTermIn>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct EptIn {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErlangIn {
    terms: Vec<ErlangTerm>,
}

/// Options that may accompany a mixture in the same file.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOptions {
    pub eps: Option<f64>,
    pub scan_end: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub enum Family {
    Gaussian(GaussianMixture),
    Pgm(PgmSum),
    Ept(EptRealization),
    Erlang { terms: Vec<ErlangTerm>, realization: EptRealization },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian(_) => "gaussian",
            Family::Pgm(_) => "pgm",
            Family::Ept(_) => "ept",
            Family::Erlang { .. } => "erlang",
        }
    }

    pub fn realization(&self) -> Option<&EptRealization> {
        match self {
            Family::Ept(r) | Family::Erlang { realization: r, .. } => Some(r),
            _ => None,
        }
    }
}

/// A parsed mixture file.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    pub family: Family,
    pub options: RunOptions,
}

fn typed<T: DeserializeOwned>(v: Value) -> Result<T, SpecError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        err(path, e.into_inner().to_string())
    })
}

fn semantic(path: String) -> impl Fn(Error) -> SpecError {
    move |e| err(path.clone(), e.to_string())
}

/// Parses `{"type": "gaussian" | "pgm" | "ept" | "erlang", ...}` plus the
/// optional keys `eps`, `scan_end`, `seed`.
pub fn parse_spec(text: &str) -> Result<MixtureSpec, SpecError> {
    let mut root: Value = {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| err(e.path().to_string(), e.into_inner().to_string()))?
    };
    let obj = root.as_object_mut().ok_or_else(|| err(".", "expected a JSON object"))?;
    let kind = match obj.remove("type") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(err("type", "expected a string")),
        None => return Err(err("type", "missing field")),
    };
    let mut opts = serde_json::Map::new();
    for k in ["eps", "scan_end", "seed"] {
        if let Some(v) = obj.remove(k) {
            opts.insert(k.to_string(), v);
        }
    }
    let options: RunOptions = typed(Value::Object(opts))?;
    if let Some(e) = options.eps {
        if !(e > 0.0) {
            return Err(err("eps", "must be positive"));
        }
    }
    if let Some(t) = options.scan_end {
        if !(t > 0.0 && t.is_finite()) {
            return Err(err("scan_end", "must be positive and finite"));
        }
    }
    let body = Value::Object(std::mem::take(obj));
    let family = match kind.as_str() {
        "gaussian" => gaussian(typed(body)?)?,
        "pgm" => pgm(typed(body)?)?,
        "ept" => {
            let e: EptIn = typed(body)?;
            let n = e.a.len();
            for (i, row) in e.a.iter().enumerate() {
                if row.len() != n {
                    return Err(err(format!("A[{i}]"), format!("expected {n} entries, got {}", row.len())));
                }
            }
            if e.b.len() != n {
                return Err(err("b", format!("expected {n} entries, got {}", e.b.len())));
            }
            if e.c.len() != n {
                return Err(err("c", format!("expected {n} entries, got {}", e.c.len())));
            }
            Family::Ept(EptRealization::from_rows(&e.a, &e.b, &e.c).map_err(semantic("A".into()))?)
        }
        "erlang" => {
            let e: ErlangIn = typed(body)?;
            for (i, t) in e.terms.iter().enumerate() {
                if !(t.lambda > 0.0) {
                    return Err(err(format!("terms[{i}].lambda"), "must be positive"));
                }
                if t.m == 0 {
                    return Err(err(format!("terms[{i}].m"), "must be at least 1"));
                }
            }
            let realization = erlang_mixture(&e.terms).map_err(semantic("terms".into()))?;
            Family::Erlang { terms: e.terms, realization }
        }
        other => return Err(err("type", format!("unknown mixture type `{other}`"))),
    };
    Ok(MixtureSpec { family, options })
}

fn gaussian(g: GaussianIn) -> Result<Family, SpecError> {
    let mut comps = Vec::with_capacity(g.components.len());
    for (i, c) in g.components.iter().enumerate() {
        if !(c.sigma2 > 0.0 && c.sigma2.is_finite()) {
            return Err(err(format!("components[{i}].sigma2"), "must be positive and finite"));
        }
        let gamma = match g.weights {
            WeightKind::Kernel => c.w,
            WeightKind::Density => c.w * crate::numeric::normal::INV_SQRT_2PI / c.sigma2.sqrt(),
        };
        comps.push(GaussianComponent { gamma, mu: c.mu, sigma2: c.sigma2 });
    }
    GaussianMixture::new(comps).map(Family::Gaussian).map_err(semantic("components".into()))
}

fn pgm(p: PgmIn) -> Result<Family, SpecError> {
    let mut terms = Vec::with_capacity(p.terms.len());
    for (i, t) in p.terms.iter().enumerate() {
        if !(t.q[2] < 0.0) {
            return Err(err(format!("terms[{i}].q[2]"), "quadratic coefficient must be negative"));
        }
        terms.push(PgmTerm::new(Polynomial::new(t.p.clone()), t.q).map_err(semantic(format!("terms[{i}]")))?);
    }
    PgmSum::new(terms).map(Family::Pgm).map_err(semantic("terms".into()))
}
