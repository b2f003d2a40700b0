//! Polynomials, rational functions, small dense matrices and the standard normal.

pub mod matrix;
pub mod normal;
pub mod poly;
pub mod polymat;
pub mod rational;
pub mod roots;

pub use matrix::{determinant, matrix_exp, Matrix, Vector};
pub use normal::std_normal;
pub use poly::Polynomial;
pub use polymat::{poly_determinant, poly_determinant_bareiss, PolyMatrix, EXACT_DIV_TOL};
pub use rational::RationalFunction;
pub use roots::{isolate_real_roots, ridders, Bracketed, RealRoot};

/// Machine epsilon; also the default refinement accuracy.
pub const EPS: f64 = f64::EPSILON;

/// Relative magnitude below which a value is treated as zero.
pub const fn sign_threshold() -> f64 {
    1e3 * EPS
}
