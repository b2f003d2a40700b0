//! W1 between Gaussian mixtures from the zeros of the CDF difference.

use gbfkit::gaussmix::GaussianMixture;
use gbfkit::wasserstein::{w1_gaussian, DEFAULT_P, DEFAULT_TAIL_TOL};

fn main() -> gbfkit::Result<()> {
    let eps = gbfkit::DEFAULT_EPS;
    let n0 = GaussianMixture::from_densities(&[(1.0, 0.0, 1.0)])?;
    for m in [0.5, 1.0, 2.0] {
        let nm = GaussianMixture::from_densities(&[(1.0, m, 1.0)])?;
        let r = w1_gaussian(&n0, &nm, DEFAULT_P, DEFAULT_TAIL_TOL, eps)?;
        println!("W1(N(0,1), N({m},1)) = {:.12}", r.distance);
    }
    let f = GaussianMixture::from_densities(&[(0.5, -1.0, 0.5), (0.5, 1.0, 0.5)])?;
    let g = GaussianMixture::from_densities(&[(1.3, 0.0, 2.0), (-0.3, 0.0, 0.6)])?;
    let r = w1_gaussian(&f, &g, DEFAULT_P, DEFAULT_TAIL_TOL, eps)?;
    println!("bimodal vs signed: W1 = {:.10}, zeros {:.5?}, tail bound {:e}", r.distance, r.zeros, r.tail_bound);
    Ok(())
}
