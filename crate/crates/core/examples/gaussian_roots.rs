//! Sign-changing zeros of a four-component mixture with negative weights.

use gbfkit::gaussmix::{find_roots, gbf_sequence, GaussianMixture};

fn main() -> gbfkit::Result<()> {
    // 4 N(1, 25) - N(2, 0.04) - N(3, 0.04) - N(4, 0.04)
    let mix = GaussianMixture::from_densities(&[(4.0, 1.0, 25.0), (-1.0, 2.0, 0.04), (-1.0, 3.0, 0.04), (-1.0, 4.0, 0.04)])?;
    let seq = gbf_sequence(&mix)?;
    println!("bounding interval: [{:.4}, {:.4}]", seq.interval.0, seq.interval.1);
    for level in &seq.levels {
        println!("{}: pivot zeros {:?}", level.label, level.pivot_zeros);
    }
    let report = find_roots(&mix, gbfkit::DEFAULT_EPS)?;
    println!("sign pattern {}", report.sign_pattern);
    for r in &report.roots {
        println!("root {:.6}  (f = {:+.3e})", r.x, mix.eval(r.x));
    }
    Ok(())
}
