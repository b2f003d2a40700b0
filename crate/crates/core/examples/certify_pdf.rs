//! Is a signed mixture a probability density?

use gbfkit::ept::{certify_ept, erlang_mixture, ErlangTerm};
use gbfkit::gaussmix::{certify_pdf, GaussianMixture};
use gbfkit::numeric::Polynomial;
use gbfkit::pgm::{certify_pgm, pair, PgmTerm};

fn main() -> gbfkit::Result<()> {
    let eps = gbfkit::DEFAULT_EPS;
    let ok = GaussianMixture::from_densities(&[(1.2, 0.0, 1.0), (-0.2, 0.0, 0.5)])?;
    let bad = GaussianMixture::from_densities(&[(1.5, 0.0, 1.0), (-0.5, 0.5, 0.1)])?;
    println!("1.2 N(0,1) - 0.2 N(0,0.5):   {:?}", certify_pdf(&ok, eps)?);
    println!("1.5 N(0,1) - 0.5 N(0.5,0.1): {:?}", certify_pdf(&bad, eps)?);

    let h1 = PgmTerm::gaussian(Polynomial::new(vec![1.0, 0.0, 1.0]), 0.0, 0.5)?;
    let h2 = PgmTerm::gaussian(Polynomial::new(vec![0.0, 4.0, 1.0]), 1.0, 1.0)?;
    println!("h1 + 0.5 h2: {:?}", certify_pgm(&pair(&h1, &h2, 0.5)?, eps)?);

    let erl = erlang_mixture(&[ErlangTerm { w: 1.0, m: 2, lambda: 1.0 }, ErlangTerm { w: -0.2, m: 1, lambda: 3.0 }])?;
    println!("Erlang 2-phase minus exponential: {:?}", certify_ept(&erl, eps, None)?);
    Ok(())
}
