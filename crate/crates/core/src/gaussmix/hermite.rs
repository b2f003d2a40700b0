use crate::numeric::Polynomial;

/// `P_0, ..., P_n` with `D^m exp(-q) = P_m exp(-q)`, `q = (x - mu)^2 / (2 sigma2)`.
pub fn hermite_polys(mu: f64, sigma2: f64, n: usize) -> Vec<Polynomial> {
    hermite_polys_scaled(mu, sigma2, n, 0.0, 1.0)
}

/// As [`hermite_polys`], expressed in `t` where `x = center + width * t`.
///
/// The recurrence `P_{m+1} = phi P_m + D_x P_m` becomes
/// `P_{m+1}(t) = phi(t) P_m(t) + P_m'(t) / width`.
pub fn hermite_polys_scaled(mu: f64, sigma2: f64, n: usize, center: f64, width: f64) -> Vec<Polynomial> {
    let phi = phi_scaled(mu, sigma2, center, width);
    let mut out = Vec::with_capacity(n + 1);
    out.push(Polynomial::one());
    for m in 0..n {
        let p = &out[m];
        let next = &(&phi * p) + &p.derivative().scale(1.0 / width);
        out.push(next);
    }
    out
}

/// `phi(x) = (mu - x) / sigma2` in the variable `t`.
pub fn phi_scaled(mu: f64, sigma2: f64, center: f64, width: f64) -> Polynomial {
    Polynomial::linear((mu - center) / sigma2, -width / sigma2)
}
