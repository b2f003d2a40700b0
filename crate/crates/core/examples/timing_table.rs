//! A small run of the timing experiment on random mixtures.

use gbfkit::bench::{rows_csv, run_bench, BenchConfig};

fn main() {
    let cfg = BenchConfig { n_min: 2, n_max: 6, nsim: 20, seed: 7, ..Default::default() };
    let result = run_bench(&cfg);
    print!("{}", rows_csv(&result.rows));
}
