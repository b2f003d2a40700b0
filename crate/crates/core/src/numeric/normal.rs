//! Standard normal density and distribution function.

pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function, via `erfc` so both tails keep relative accuracy.
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Upper tail `1 - Phi(x)`.
pub fn sf(x: f64) -> f64 {
    cdf(-x)
}

/// `(phi(x), Phi(x))`
pub fn std_normal(x: f64) -> (f64, f64) {
    (pdf(x), cdf(x))
}

/// `H(y) = y Phi(y) + phi(y)`, the antiderivative of `Phi` vanishing at minus infinity.
///
/// For `y > 0` this uses `H(y) = y + H(-y)`, which avoids cancellation in the left tail.
pub fn cdf_antiderivative(y: f64) -> f64 {
    if y > 0.0 {
        y + upper_antiderivative(y)
    } else {
        y * cdf(y) + pdf(y)
    }
}

/// `G(y) = phi(y) - y (1 - Phi(y)) = H(-y)`, the integral of `1 - Phi` over `[y, inf)`.
pub fn upper_antiderivative(y: f64) -> f64 {
    if y < 0.0 {
        -y + upper_antiderivative(-y)
    } else if y < 4.0 {
        pdf(y) - y * sf(y)
    } else {
        // Continued fraction of the Mills ratio: G(y) = phi(y) t / (y + t).
        let mut t = 0.0;
        for k in (1..=200).rev() {
            t = k as f64 / (y + t);
        }
        pdf(y) * t / (y + t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_and_symmetry() {
        assert_eq!(std_normal(0.0), (INV_SQRT_2PI, 0.5));
        assert_eq!(cdf(40.0), 1.0);
        assert_eq!(cdf(-40.0), 0.0);
        for i in -80..=80 {
            let x = i as f64 / 10.0;
            assert!((cdf(x) + cdf(-x) - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn antiderivative_branches_agree() {
        for y in [-3.0, -0.5, 0.0, 0.5, 3.0] {
            let direct = y * cdf(y) + pdf(y);
            assert!((cdf_antiderivative(y) - direct).abs() < 1e-14);
            assert!((upper_antiderivative(y) - cdf_antiderivative(-y)).abs() < 1e-15);
        }
        let g = upper_antiderivative(30.0);
        let approx = pdf(30.0) / 900.0 * (1.0 - 3.0 / 900.0 + 15.0 / 810000.0);
        assert!((g - approx).abs() < 1e-6 * approx);
        let y = 4.0;
        assert!((upper_antiderivative(y) - (pdf(y) - y * sf(y))).abs() < 1e-9 * upper_antiderivative(y));
    }
}
