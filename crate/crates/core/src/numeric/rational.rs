use std::ops::{Add, Mul, Sub};

use super::poly::Polynomial;
use super::roots::complex_roots;
use super::sign_threshold;

/// Root-matching tolerance for common-factor detection.
pub const GCD_TOL: f64 = 1e-8;

/// Quotient of two polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction::new(p, Polynomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    /// Value and magnitude scale (numerator scale over |denominator|).
    pub fn eval_with_scale(&self, x: f64) -> (f64, f64) {
        let (n, ns) = self.num.eval_with_scale(x);
        let d = self.den.eval(x);
        (n / d, ns / d.abs())
    }

    pub fn derivative(&self) -> RationalFunction {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction::new(num, &self.den * &self.den)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> RationalFunction {
        RationalFunction::new(&self.num * p, self.den.clone())
    }

    /// Moves the leading coefficient of the denominator into the numerator.
    pub fn normalized(&self) -> RationalFunction {
        let l = self.den.leading();
        RationalFunction::new(self.num.scale(1.0 / l), self.den.scale(1.0 / l))
    }

    /// Cancels common factors found by locating denominator roots that the
    /// numerator also vanishes at. Leaves the function unchanged when the
    /// candidate factor does not divide both parts exactly.
    pub fn reduced(&self) -> RationalFunction {
        let mut cur = self.normalized();
        if cur.num.is_zero() {
            return RationalFunction::new(Polynomial::zero(), Polynomial::one());
        }
        while cur.den.degree() > 0 {
            let Some(g) = common_factor(&cur.num, &cur.den) else { break };
            let n = cur.num.div_exact(&g, GCD_TOL);
            let d = cur.den.div_exact(&g, GCD_TOL);
            match (n, d) {
                (Ok(n), Ok(d)) => cur = RationalFunction::new(n, d).normalized(),
                _ => {
                    log::debug!("common-factor candidate of degree {} rejected", g.degree());
                    break;
                }
            }
        }
        cur
    }
}

/// Product of `(x - r)` over the distinct roots `r` of `den` at which `num`
/// vanishes (complex pairs combined into real quadratics).
fn common_factor(num: &Polynomial, den: &Polynomial) -> Option<Polynomial> {
    let roots = complex_roots(den);
    let scale = |z: nalgebra::Complex<f64>| z.norm().max(1.0);
    let mut picked: Vec<nalgebra::Complex<f64>> = Vec::new();
    for z in roots {
        if z.im < -GCD_TOL * scale(z) {
            continue;
        }
        if picked.iter().any(|w| (z - w).norm() <= GCD_TOL.sqrt() * scale(z)) {
            continue;
        }
        let (mut v, mut s) = (nalgebra::Complex::new(0.0, 0.0), 0.0);
        for &c in num.coeffs().iter().rev() {
            v = v * z + c;
            s = s * z.norm() + c.abs();
        }
        // First-order perturbation of an inexact root: allow |num'(z)| * root error.
        let dnum = num.derivative();
        let ds = dnum.eval_with_scale(z.norm()).1;
        if v.norm() <= sign_threshold() * s + GCD_TOL * ds {
            picked.push(z);
        }
    }
    if picked.is_empty() {
        return None;
    }
    let mut g = Polynomial::one();
    for z in picked {
        let f = if z.im.abs() <= GCD_TOL * scale(z) {
            Polynomial::linear(-z.re, 1.0)
        } else {
            Polynomial::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0])
        };
        g = &g * &f;
    }
    Some(g)
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let neg = RationalFunction::new(-&rhs.num, rhs.den.clone());
        self + &neg
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}
