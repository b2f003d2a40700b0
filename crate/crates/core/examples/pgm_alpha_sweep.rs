//! How the number of zeros of h1 + alpha h2 changes with alpha.
//!
//! h1 = (x^2 + 1) exp(-x^2), h2 = (x^2 + 4x) exp(-(x - 1)^2 / 2).

use gbfkit::numeric::Polynomial;
use gbfkit::pgm::{alpha_thresholds, bounding_interval, find_roots_pgm, pair, PgmTerm};

fn main() -> gbfkit::Result<()> {
    let h1 = PgmTerm::gaussian(Polynomial::new(vec![1.0, 0.0, 1.0]), 0.0, 0.5)?;
    let h2 = PgmTerm::gaussian(Polynomial::new(vec![0.0, 4.0, 1.0]), 1.0, 1.0)?;
    let (a, b) = bounding_interval(&pair(&h1, &h2, 1.0)?)?;
    println!("thresholds alpha = -h1/h2 at the zeros of W(h1, h2) on [{a:.3}, {b:.3}]:");
    for (x, alpha) in alpha_thresholds(&h1, &h2, a, b)? {
        println!("  x = {x:>9.5}  alpha = {alpha:.4}");
    }
    for alpha in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let roots = find_roots_pgm(&pair(&h1, &h2, alpha)?, gbfkit::DEFAULT_EPS)?;
        println!("alpha = {alpha:<4}  {} zeros {:.5?}", roots.roots.len(), roots.xs());
    }
    Ok(())
}
