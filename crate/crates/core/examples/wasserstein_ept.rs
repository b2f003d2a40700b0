//! W1 between EPT distributions, tails included exactly.

use gbfkit::ept::{erlang_mixture, EptRealization, ErlangTerm};
use gbfkit::wasserstein::w1_ept;

fn main() -> gbfkit::Result<()> {
    let eps = gbfkit::DEFAULT_EPS;
    let e1 = EptRealization::exponential(1.0)?;
    let e2 = EptRealization::exponential(2.0)?;
    println!("W1(Exp(1), Exp(2)) = {:.12}", w1_ept(&e1, &e2, eps, None)?.distance);

    let erl = erlang_mixture(&[ErlangTerm { w: 1.0, m: 3, lambda: 3.0 }])?;
    let r = w1_ept(&e1, &erl, eps, None)?;
    println!("W1(Exp(1), Erlang(3, 3)) = {:.12}, CDFs cross at {:.6?}", r.distance, r.zeros);
    Ok(())
}
