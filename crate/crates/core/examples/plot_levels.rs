//! CSV of every level of the sequence, ready for plotting.

use gbfkit::gaussmix::{gbf_sequence, GaussianMixture};
use gbfkit::plot::{plot_csv, sign_changes};

fn main() -> gbfkit::Result<()> {
    let mix = GaussianMixture::from_densities(&[(4.0, 1.0, 25.0), (-1.0, 2.0, 0.04), (-1.0, 3.0, 0.04), (-1.0, 4.0, 0.04)])?;
    let seq = gbf_sequence(&mix)?;
    let csv = plot_csv(&seq.levels, 1.0, 5.0, 0.01);
    for level in seq.levels.iter().rev() {
        println!("{}: {} sign changes on [1, 5]", level.label, sign_changes(&csv, &level.label));
    }
    let path = std::env::temp_dir().join("gbf_levels.csv");
    std::fs::write(&path, csv).expect("writable temp dir");
    println!("wrote {}", path.display());
    Ok(())
}
