use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use serde::Serialize;

use gbfkit::bench::{fit_two_exponentials, rows_csv, run_bench, BenchConfig};
use gbfkit::io::{self, parse_spec, MixtureSpec, SpecError, SCHEMA};
use gbfkit::wasserstein::{DEFAULT_P, DEFAULT_TAIL_TOL};

/// Sign-changing zeros, PDF certification and W1 distances for signed mixtures.
#[derive(Parser)]
#[command(name = "gbfkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Sign threshold parameter; overrides the value in the mixture file.
    #[arg(long)]
    eps: Option<f64>,
    /// Right end of the scan interval for EPT functions.
    #[arg(long)]
    scan_end: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sign-changing zeros of a mixture.
    Roots {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Whether a mixture is a valid density.
    Certify {
        spec: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// W1 distance between two mixtures of the same family.
    Wasserstein {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Moment order used for the Gaussian tail bound.
        #[arg(long, default_value_t = DEFAULT_P)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
        tail_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Timing experiment on random Gaussian mixtures (CSV).
    Bench {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        nsim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (default: logical cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        /// Also fit a exp(b n) + c exp(d n) to the average times (printed to stderr).
        #[arg(long)]
        fit: bool,
        /// Write per-simulation records as JSON to this file.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of every level of the sequence on a grid.
    PlotData {
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lo: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        hi: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<gbfkit::Error> for Failure {
    fn from(e: gbfkit::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

fn load(path: &Path) -> Result<MixtureSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Validation(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, doc: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable report");
    text.push('\n');
    emit(out, &text)
}

fn eps_for(common: &Common, spec: &MixtureSpec) -> f64 {
    common.eps.or(spec.options.eps).unwrap_or(gbfkit::DEFAULT_EPS)
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Validation(format!("--{name} must be positive and finite, got {v}")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Roots { spec, common } => {
            let s = load(&spec)?;
            let eps = positive("eps", eps_for(&common, &s))?;
            info!("roots: {} mixture, eps = {eps:e}", s.family.name());
            let report = io::run_roots(&s, eps, common.scan_end)?;
            debug!("interval {:?}, {} roots", report.interval, report.roots.len());
            emit_json(common.out.as_deref(), &io::roots_doc(&s, eps, report))
        }
        Cmd::Certify { spec, common } => {
            let s = load(&spec)?;
            let eps = positive("eps", eps_for(&common, &s))?;
            let (verdict, interval) = io::run_certify(&s, eps, common.scan_end)?;
            let doc = io::CertifyDoc { schema: SCHEMA.into(), family: s.family.name().into(), verdict, interval };
            emit_json(common.out.as_deref(), &doc)
        }
        Cmd::Wasserstein { a, b, p, tail_tol, common } => {
            let (sa, sb) = (load(&a)?, load(&b)?);
            let eps = positive("eps", eps_for(&common, &sa))?;
            let doc = io::run_wasserstein(&sa, &sb, p, positive("tail-tol", tail_tol)?, eps, common.scan_end)?;
            emit_json(common.out.as_deref(), &doc)
        }
        Cmd::Bench { n_min, n_max, nsim, seed, jobs, eps, fit, records, out } => {
            if n_min < 1 || n_max < n_min || nsim == 0 {
                return Err(Failure::Validation("need 1 <= n-min <= n-max and nsim >= 1".into()));
            }
            let cfg = BenchConfig {
                n_min,
                n_max,
                nsim,
                seed,
                jobs,
                eps: positive("eps", eps.unwrap_or(gbfkit::DEFAULT_EPS))?,
                ..Default::default()
            };
            info!("bench: n in {n_min}..={n_max}, {nsim} simulations each");
            let result = run_bench(&cfg);
            if fit {
                let ns: Vec<f64> = result.rows.iter().map(|r| r.n as f64).collect();
                let ts: Vec<f64> = result.rows.iter().map(|r| r.average).collect();
                match fit_two_exponentials(&ns, &ts) {
                    Some([a, b, c, d]) => eprintln!("fit: a = {a:e}, b = {b}, c = {c:e}, d = {d}"),
                    None => eprintln!("fit: needs at least four values of n"),
                }
            }
            if let Some(path) = records {
                let doc = serde_json::json!({ "schema": SCHEMA, "config": cfg, "sims": result.sims });
                emit_json(Some(&path), &doc)?;
            }
            emit(out.as_deref(), &rows_csv(&result.rows))
        }
        Cmd::PlotData { spec, lo, hi, step, common } => {
            let s = load(&spec)?;
            let eps = positive("eps", eps_for(&common, &s))?;
            positive("step", step)?;
            let (lo, hi) = match (lo, hi) {
                (Some(l), Some(h)) => (l, h),
                (l, h) => {
                    let r = io::run_roots(&s, eps, common.scan_end)?;
                    (l.unwrap_or(r.interval[0]), h.unwrap_or(r.interval[1]))
                }
            };
            if !(lo < hi) {
                return Err(Failure::Validation(format!("empty range [{lo}, {hi}]")));
            }
            let lo = if s.family.realization().is_some() { lo.max(0.0) } else { lo };
            let (levels, _) = io::levels_for(&s, lo, hi)?;
            emit(common.out.as_deref(), &gbfkit::plot::plot_csv(&levels, lo, hi, step))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GBFKIT_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}
