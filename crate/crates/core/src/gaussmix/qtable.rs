use super::hermite::{hermite_polys_scaled, phi_scaled};
use super::GaussianMixture;
use crate::error::{Error, Result};
use crate::numeric::{poly_determinant, Polynomial, EXACT_DIV_TOL};

/// Coefficients below this fraction of the largest one are dropped from Q entries.
const TRIM: f64 = 1e-13;

/// The Q-polynomials `Q^j_{1..j,k}` of a mixture, in the variable
/// `t = (x - center) / width`.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    pub center: f64,
    pub width: f64,
    n: usize,
    /// `rows[j][k - j - 1] = Q^j_{1..j,k}` for `0 <= j < n`, `j < k <= n` (1-based `k`).
    rows: Vec<Vec<Polynomial>>,
}

impl QTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `Q^j_{1..j,k}` with 1-based `k > j`.
    pub fn get(&self, j: usize, k: usize) -> &Polynomial {
        assert!(k > j && k <= self.n, "Q^{j}_(1..{j},{k}) is not stored");
        &self.rows[j][k - j - 1]
    }

    /// `Q^{j-1}_{1..j}`, with `diagonal(0) = 1`.
    pub fn diagonal(&self, j: usize) -> Polynomial {
        if j == 0 {
            Polynomial::one()
        } else {
            self.get(j - 1, j).clone()
        }
    }

    /// Largest coefficientwise relative distance between matching entries.
    pub fn max_relative_distance(&self, other: &QTable) -> f64 {
        assert_eq!(self.n, other.n);
        self.rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.relative_distance(q)))
            .fold(0.0, f64::max)
    }
}

/// Q-table from the determinant definition, in the variable `x`.
pub fn q_table_determinant(mix: &GaussianMixture) -> Result<QTable> {
    q_table_determinant_scaled(mix, 0.0, 1.0)
}

/// Q-table from the first-order recursion, in the variable `x`.
pub fn q_table_recursive(mix: &GaussianMixture) -> Result<QTable> {
    q_table_recursive_scaled(mix, 0.0, 1.0)
}

/// Every entry is the fraction-free determinant of the matrix whose rows
/// are `1, P_1, ..., P_j` evaluated for the components `1..j, k`.
pub fn q_table_determinant_scaled(mix: &GaussianMixture, center: f64, width: f64) -> Result<QTable> {
    let comps = mix.components();
    let n = comps.len();
    let hp: Vec<Vec<Polynomial>> = comps
        .iter()
        .map(|c| hermite_polys_scaled(c.mu, c.sigma2, n, center, width))
        .collect();
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(n - j);
        for k in j + 1..=n {
            let cols: Vec<usize> = (0..j).chain(std::iter::once(k - 1)).collect();
            let m: Vec<Vec<Polynomial>> = (0..=j)
                .map(|r| cols.iter().map(|&c| hp[c][r].clone()).collect())
                .collect();
            row.push(poly_determinant(&m)?.trim_relative(TRIM));
        }
        rows.push(row);
    }
    finish(QTable { center, width, n, rows })
}

/// Builds level `j` from levels `j - 1` and `j - 2` using only first
/// derivatives and one exact division per entry.
pub fn q_table_recursive_scaled(mix: &GaussianMixture, center: f64, width: f64) -> Result<QTable> {
    let comps = mix.components();
    let n = comps.len();
    let phi: Vec<Polynomial> = comps
        .iter()
        .map(|c| phi_scaled(c.mu, c.sigma2, center, width))
        .collect();
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    rows.push(vec![Polynomial::one(); n]);
    for j in 1..n {
        let mut row = Vec::with_capacity(n - j);
        for k in j + 1..=n {
            let entry = if j == 1 {
                &phi[k - 1] - &phi[0]
            } else {
                // Q^{j-1}_{1..j}, Q^{j-1}_{1..j-1,k} and Q^{j-2}_{1..j-1}.
                let diag = &rows[j - 1][0];
                let side = &rows[j - 1][k - j];
                let prev = &rows[j - 2][0];
                let t1 = &(diag * &(&phi[k - 1] - &phi[j - 1])) * side;
                let t2 = (diag * &side.derivative()).scale(1.0 / width);
                let t3 = (side * &diag.derivative()).scale(1.0 / width);
                let scale = t1.max_norm().max(t2.max_norm()).max(t3.max_norm());
                let num = &(&t1 + &t2) - &t3;
                num.div_exact_scaled(prev, EXACT_DIV_TOL, scale)?
            };
            row.push(entry.trim_relative(TRIM));
        }
        rows.push(row);
    }
    finish(QTable { center, width, n, rows })
}

fn finish(t: QTable) -> Result<QTable> {
    for j in 0..t.n {
        if t.get(j, j + 1).is_zero() {
            return Err(Error::LinearlyDependentTerms { order: j + 1 });
        }
    }
    Ok(t)
}
