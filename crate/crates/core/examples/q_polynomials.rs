//! Q-polynomials of a Gaussian mixture from determinants and from the
//! first-order recursion.

use gbfkit::gaussmix::{q_table_determinant, q_table_recursive, GaussianMixture};

fn main() -> gbfkit::Result<()> {
    let mix = GaussianMixture::from_triples(&[(0.7, -1.0, 0.5), (-0.4, 2.0, 0.3), (0.2, 0.5, 0.9), (-0.1, 1.5, 0.2)])?;
    let det = q_table_determinant(&mix)?;
    let rec = q_table_recursive(&mix)?;
    for j in 1..mix.len() {
        println!("Q^{j}_(1..{}) = {:?}", j + 1, det.get(j, j + 1).coeffs());
    }
    println!("max coefficientwise relative distance: {:e}", det.max_relative_distance(&rec));
    Ok(())
}
