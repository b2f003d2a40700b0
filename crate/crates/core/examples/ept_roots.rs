//! Zeros of functions c exp(Ax) b: an oscillating one and a signed Erlang mixture.

use gbfkit::ept::{erlang_mixture, find_roots_ept, t_auto, EptRealization, ErlangTerm};

fn main() -> gbfkit::Result<()> {
    // e^{-x/10} (sin x + cos x) via a 2x2 block with complex eigenvalues.
    let osc = EptRealization::from_rows(&[vec![-0.1, 1.0], vec![-1.0, -0.1]], &[1.0, 1.0], &[1.0, 0.0])?;
    let rep = find_roots_ept(&osc, gbfkit::DEFAULT_EPS, Some(12.0))?;
    println!("oscillating, [0, 12]: {:.6?}", rep.xs());

    let erl = erlang_mixture(&[
        ErlangTerm { w: 1.0, m: 1, lambda: 1.0 },
        ErlangTerm { w: -0.6, m: 3, lambda: 2.0 },
        ErlangTerm { w: 0.3, m: 2, lambda: 0.5 },
    ])?;
    println!("Erlang mixture: scan end {:.3}", t_auto(&erl)?);
    let rep = find_roots_ept(&erl, gbfkit::DEFAULT_EPS, None)?;
    println!("  interval {:?}, zeros {:.6?}, pattern {}", rep.interval, rep.xs(), rep.sign_pattern);
    Ok(())
}
