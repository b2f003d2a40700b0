//! One line per acceptance criterion. Tolerances and instance counts are
//! fixed below; the process exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use common::*;
use gbfkit::bench::{run_bench, BenchConfig};
use gbfkit::ept::{char_factorize, gbf_sequence_ept, t_auto, EptRealization};
use gbfkit::gaussmix::qtable::{q_table_determinant_scaled, q_table_recursive_scaled};
use gbfkit::gaussmix::{data_scaling, find_roots, gbf_sequence, GaussianMixture};
use gbfkit::numeric::Polynomial;
use gbfkit::pgm::{alpha_thresholds, find_roots_pgm, gbf_sequence_wronskian, pair, PgmTerm};
use gbfkit::wasserstein::{w1_ept, w1_gaussian, DEFAULT_P, DEFAULT_TAIL_TOL};
use gbfkit::DEFAULT_EPS;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PIVOT_REL: f64 = 1e-9;
const GRID_ABS: f64 = 1e-4;
const ALPHA_ABS: f64 = 5e-4;
const SCAN_STEP: f64 = 1e-4;
const ROOT_ABS: f64 = 1e-6;
const QTABLE_REL: f64 = 1e-8;
const IDENTITY_REL: f64 = 1e-5;
const IDENTITY_STEP: f64 = 1e-6;
const GAUSS_ANNIHILATION: f64 = 1e-8;
const EPT_ANNIHILATION: f64 = 1e-9;
const W1_SHIFT_ABS: f64 = 1e-6;
const W1_EXP_ABS: f64 = 1e-9;
const W1_ORACLE_ABS: f64 = 1e-8;
const SYMMETRY_ABS: f64 = 1e-9;
const TRIANGLE_SLACK: f64 = 1e-8;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pair_terms() -> (PgmTerm, PgmTerm) {
    let h1 = PgmTerm::new(Polynomial::new(vec![1.0, 0.0, 1.0]), [0.0, 0.0, -1.0]).unwrap();
    let h2 = PgmTerm::new(Polynomial::new(vec![0.0, 4.0, 1.0]), [-0.5, 1.0, -0.5]).unwrap();
    (h1, h2)
}

fn pair_data(alpha: f64) -> Vec<(Vec<f64>, [f64; 3])> {
    vec![(vec![1.0, 0.0, 1.0], [0.0, 0.0, -1.0]), (vec![0.0, 4.0 * alpha, alpha], [-0.5, 1.0, -0.5])]
}

fn pair_pivot() -> Outcome {
    let (h1, h2) = pair_terms();
    let seq = gbf_sequence_wronskian(&pair(&h1, &h2, 1.0).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let num = seq.numerator_in_x(1, 2);
    let want = [4.0, 6.0, 1.0, 5.0, 5.0, 1.0];
    check(num.degree() == 5 && num.leading() > 0.0, format!("numerator {num:?}"))?;
    let k = num.leading();
    let err = want.iter().enumerate().map(|(i, w)| (num.coeff(i) / k - w).abs() / w).fold(0.0, f64::max);
    check(err <= PIVOT_REL, format!("relative error {err:e}"))?;
    Ok(format!("max rel err {err:.1e}"))
}

fn pair_grid() -> Outcome {
    let (h1, h2) = pair_terms();
    let t = alpha_thresholds(&h1, &h2, -10.0, 10.0).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = t[1..t.len() - 1].iter().map(|p| p.0).collect();
    let want = [-3.57116, -1.72866, -0.638509];
    check(xs.len() == 3, format!("grid {xs:?}"))?;
    let err = xs.iter().zip(want).map(|(x, w)| (x - w).abs()).fold(0.0, f64::max);
    check(err <= GRID_ABS, format!("grid {xs:?}"))?;
    Ok(format!("{:.6} {:.6} {:.6}", xs[0], xs[1], xs[2]))
}

fn pair_thresholds() -> Outcome {
    let (h1, h2) = pair_terms();
    let t = alpha_thresholds(&h1, &h2, -10.0, 10.0).map_err(|e| e.to_string())?;
    let al: Vec<f64> = t[1..t.len() - 1].iter().map(|p| p.1).collect();
    check(al.len() == 3, format!("thresholds {al:?}"))?;
    let err = al.iter().zip([0.8955, 2.1173, 1.6700]).map(|(a, w)| (a - w).abs()).fold(0.0, f64::max);
    check(err <= ALPHA_ABS, format!("thresholds {al:?}"))?;
    Ok(format!("{:.4} {:.4} {:.4}", al[0], al[1], al[2]))
}

fn pair_verdicts() -> Outcome {
    let (h1, h2) = pair_terms();
    let mut counts = Vec::new();
    for (alpha, want) in [(0.5, 0), (2.0, 4)] {
        let sum = pair(&h1, &h2, alpha).map_err(|e| e.to_string())?;
        let rep = find_roots_pgm(&sum, DEFAULT_EPS).map_err(|e| e.to_string())?;
        let data = pair_data(alpha);
        let oracle = dense_sign_changes(|x| pgm_sign(&data, x), -10.0, 10.0, SCAN_STEP);
        check(rep.roots.len() == want, format!("alpha {alpha}: {} roots", rep.roots.len()))?;
        check(matches_oracle(&rep.xs(), &oracle, 1e-9), format!("alpha {alpha}: {:?} vs {oracle:?}", rep.xs()))?;
        if alpha == 0.5 {
            let coarse = (0..=2000).all(|i| pgm_sign(&data, -10.0 + 0.01 * i as f64) >= 0.0);
            let [a, b] = rep.interval;
            let tails = (1..=50).all(|k| pgm_sign(&data, a - k as f64) >= 0.0 && pgm_sign(&data, b + k as f64) >= 0.0);
            check(coarse && tails && a > -10.0 && b < 10.0, "f_0.5 not nonnegative on samples")?;
        }
        counts.push(rep.roots.len());
    }
    Ok(format!("root counts {counts:?}"))
}

fn four_bumps() -> Outcome {
    let spec = gbfkit::io::parse_spec(&std::fs::read_to_string(format!("{}/fixtures/four_bumps.json", env!("CARGO_MANIFEST_DIR"))).unwrap())
        .map_err(|e| e.to_string())?;
    let gbfkit::io::Family::Gaussian(mix) = &spec.family else { return Err("fixture is not gaussian".into()) };
    let rep = find_roots(mix, spec.options.eps.unwrap_or(DEFAULT_EPS)).map_err(|e| e.to_string())?;
    let t: Vec<(f64, f64, f64)> = mix.components().iter().map(|c| (c.gamma, c.mu, c.sigma2)).collect();
    let [a, b] = rep.interval;
    let oracle = dense_sign_changes(|x| gauss_sign(&t, x), a, b, SCAN_STEP);
    check(matches_oracle(&rep.xs(), &oracle, 1e-9), format!("{:?} vs scan {oracle:?}", rep.xs()))?;
    // Bisect each oracle cell with the independent sign function for a 1e-6 comparison.
    for (r, (m, w)) in rep.xs().iter().zip(&oracle) {
        let (mut lo, mut hi) = (m - 0.5 * w, m + 0.5 * w);
        let s = gauss_sign(&t, lo);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if gauss_sign(&t, mid) == s {
                lo = mid
            } else {
                hi = mid
            }
        }
        check((r - 0.5 * (lo + hi)).abs() <= ROOT_ABS, format!("root {r} vs {}", 0.5 * (lo + hi)))?;
        check(a < *r && *r < b, format!("root {r} outside [{a}, {b}]"))?;
    }
    // Outside the interval: sampled sign and dominance of the widest kernel.
    let dom = mix.dominant(true);
    let others: f64 = mix.components().iter().filter(|c| *c != dom).map(|c| c.gamma.abs()).sum();
    for k in 0..50 {
        let d = 0.1 * k as f64;
        for x in [a - d, b + d] {
            check(gauss_sign(&t, x) == 1.0, format!("sign at {x}"))?;
            let lhs = dom.gamma.ln() - dom.q(x);
            let rhs = mix.components().iter().filter(|c| *c != dom).map(|c| -c.q(x)).fold(f64::NEG_INFINITY, f64::max) + others.ln();
            check(lhs > rhs, format!("no dominance at {x}"))?;
        }
    }
    Ok(format!("{} roots on [{a:.4}, {b:.4}]", rep.roots.len()))
}

fn qtable_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + i);
        let n = 1 + (i as usize % 5);
        let mix = GaussianMixture::from_triples(&random_gauss_triples(&mut rng, n)).map_err(|e| e.to_string())?;
        let (c, s) = data_scaling(&mix);
        let d = q_table_determinant_scaled(&mix, c, s).map_err(|e| format!("instance {i}: {e}"))?;
        let r = q_table_recursive_scaled(&mix, c, s).map_err(|e| format!("instance {i}: {e}"))?;
        let e = d.max_relative_distance(&r);
        check(e <= QTABLE_REL, format!("instance {i}: {e:e}"))?;
        worst = worst.max(e);
    }
    Ok(format!("200 mixtures, worst rel {worst:.1e}"))
}

fn identity_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + i);
        let n = 1 + (i as usize / 3) % 5;
        let e = match i % 3 {
            0 => {
                let mix = GaussianMixture::from_triples(&random_gauss_triples(&mut rng, n)).unwrap();
                let seq = gbf_sequence(&mix).map_err(|e| e.to_string())?;
                identity_worst(&seq.levels, seq.interval.0, seq.interval.1, 100, IDENTITY_STEP, i)
            }
            1 => {
                let seq = gbf_sequence_wronskian(&pgm_from_data(&random_pgm_data(&mut rng, n))).map_err(|e| e.to_string())?;
                identity_worst(&seq.levels, seq.interval.0, seq.interval.1, 100, IDENTITY_STEP, i)
            }
            _ => {
                let r = random_stable_ept(&mut rng, n);
                let t = t_auto(&r).unwrap_or(20.0);
                let fac = char_factorize(&r.a).map_err(|e| e.to_string())?;
                let levels = gbf_sequence_ept(&r, &fac, 0.0, t).map_err(|e| e.to_string())?;
                identity_worst(&levels, 0.0, t, 100, IDENTITY_STEP, i)
            }
        };
        check(e <= IDENTITY_REL, format!("instance {i}: {e:e}"))?;
        worst = worst.max(e);
    }
    Ok(format!("100 instances, worst rel {worst:.1e}"))
}

fn annihilation_suite() -> Outcome {
    let (mut wg, mut we): (f64, f64) = (0.0, 0.0);
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(8000 + i);
        let n = 1 + (i as usize % 5);
        let g = annihilation_residual(&random_gauss_triples(&mut rng, n));
        check(g <= GAUSS_ANNIHILATION, format!("gaussian instance {i}: {g:e}"))?;
        wg = wg.max(g);
        let r = random_stable_ept(&mut rng, 1 + (i as usize % 6));
        for k in 0..50 {
            let e = ept_annihilation_ratio(&r, 0.2 * k as f64);
            check(e <= EPT_ANNIHILATION, format!("ept instance {i} at {}: {e:e}", 0.2 * k as f64))?;
            we = we.max(e);
        }
    }
    Ok(format!("gaussian worst {wg:.1e}, ept worst {we:.1e}"))
}

fn density(t: &[(f64, f64, f64)]) -> GaussianMixture {
    GaussianMixture::from_densities(t).unwrap()
}

fn w1g(a: &[(f64, f64, f64)], b: &[(f64, f64, f64)]) -> Result<f64, String> {
    Ok(w1_gaussian(&density(a), &density(b), DEFAULT_P, DEFAULT_TAIL_TOL, DEFAULT_EPS).map_err(|e| e.to_string())?.distance)
}

fn w1e(a: &EptRealization, b: &EptRealization) -> Result<f64, String> {
    Ok(w1_ept(a, b, DEFAULT_EPS, None).map_err(|e| e.to_string())?.distance)
}

fn wasserstein_exactness() -> Outcome {
    for m in [0.5, 1.0, 2.0] {
        let d = w1g(&[(1.0, 0.0, 1.0)], &[(1.0, m, 1.0)])?;
        check((d - m).abs() <= W1_SHIFT_ABS, format!("shift {m}: {d}"))?;
    }
    let d = w1e(&EptRealization::exponential(1.0).unwrap(), &EptRealization::exponential(2.0).unwrap())?;
    check((d - 0.5).abs() <= W1_EXP_ABS, format!("Exp(1) vs Exp(2): {d}"))?;
    let tol = W1_ORACLE_ABS.max(DEFAULT_TAIL_TOL);
    let (mut wg, mut we): (f64, f64) = (0.0, 0.0);
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + i);
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (a, b) = (random_density_triples(&mut rng, n), random_density_triples(&mut rng, m));
        let e = (w1g(&a, &b)? - w1_gauss_oracle(&a, &b)).abs();
        check(e <= tol, format!("gaussian pair {i}: {e:e}"))?;
        wg = wg.max(e);
        let (x, y) = (random_exp_mixture(&mut rng, n), random_exp_mixture(&mut rng, m));
        let e = (w1e(&x, &y)? - w1_exp_oracle(&x, &y)).abs();
        check(e <= tol, format!("ept pair {i}: {e:e}"))?;
        we = we.max(e);
    }
    Ok(format!("oracle gaps: gaussian {wg:.1e}, ept {we:.1e}"))
}

fn bench_design() -> Outcome {
    let mut medians = vec![Vec::new(); 7];
    for run in 0..3u64 {
        let cfg = BenchConfig { n_min: 2, n_max: 8, nsim: 10, seed: 42 + run, jobs: Some(1), ..BenchConfig::default() };
        let res = run_bench(&cfg);
        for row in &res.rows {
            check(row.failures == 0, format!("run {run}, n = {}: {} failures", row.n, row.failures))?;
            medians[row.n - 2].push(row.median);
        }
        for s in &res.sims {
            let oracle = gauss_oracle_roots(&s.components, s.interval[0], s.interval[1]);
            check(matches_oracle(&s.roots, &oracle, 1e-9), format!("run {run}, n = {}, sim {}: {:?} vs {oracle:?}", s.n, s.index, s.roots))?;
        }
    }
    let med: Vec<f64> = medians
        .into_iter()
        .map(|mut v| {
            v.sort_by(f64::total_cmp);
            v[1]
        })
        .collect();
    check(med.windows(2).all(|w| w[0] <= w[1]), format!("medians not monotone: {med:?}"))?;
    Ok(format!("medians (s) {}", med.iter().map(|m| format!("{m:.1e}")).collect::<Vec<_>>().join(" ")))
}

fn metric_axioms() -> Outcome {
    let (mut sym, mut tri): (f64, f64) = (0.0, f64::INFINITY);
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + i);
        let t: Vec<Vec<(f64, f64, f64)>> = (0..3)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_density_triples(&mut rng, n)
            })
            .collect();
        let (ab, ba, ac, cb) = (w1g(&t[0], &t[1])?, w1g(&t[1], &t[0])?, w1g(&t[0], &t[2])?, w1g(&t[2], &t[1])?);
        let r: Vec<EptRealization> = (0..3)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_exp_mixture(&mut rng, n)
            })
            .collect();
        let (xy, yx, xz, zy) = (w1e(&r[0], &r[1])?, w1e(&r[1], &r[0])?, w1e(&r[0], &r[2])?, w1e(&r[2], &r[1])?);
        for (d1, d2, d3, d4, fam) in [(ab, ba, ac, cb, "gaussian"), (xy, yx, xz, zy, "ept")] {
            check((d1 - d2).abs() <= SYMMETRY_ABS, format!("{fam} triple {i}: asymmetry {:e}", (d1 - d2).abs()))?;
            check(d1 <= d3 + d4 + TRIANGLE_SLACK, format!("{fam} triple {i}: {d1} > {d3} + {d4}"))?;
            sym = sym.max((d1 - d2).abs());
            tri = tri.min(d3 + d4 - d1);
        }
    }
    Ok(format!("max asymmetry {sym:.1e}, min triangle margin {tri:.1e}"))
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 11] = [
        ("pivot numerator of the two-term PGM pair", 1.0, pair_pivot),
        ("grid of the two-term PGM pair", 1.0, pair_grid),
        ("alpha thresholds at the grid points", 1.0, pair_thresholds),
        ("root counts for alpha = 0.5 and alpha = 2", 2.0, pair_verdicts),
        ("four-component Gaussian example", 5.0, four_bumps),
        ("recursive and determinant Q-tables agree", 60.0, qtable_suite),
        ("defining identity across families", 120.0, identity_suite),
        ("annihilation of f", 60.0, annihilation_suite),
        ("W1 exactness and quadrature agreement", 120.0, wasserstein_exactness),
        ("timing experiment design", 900.0, bench_design),
        ("W1 metric axioms", 120.0, metric_axioms),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match out {
            Ok(d) if secs <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.2} s, limit {limit} s")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("[{}] {:>2}. {name} ({secs:.2} s): {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
