use thiserror::Error;

/// Errors raised by the numerical pipelines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A polynomial division that must be exact left a residual larger than the tolerance.
    #[error("polynomial division not exact: relative residual {residual:e} exceeds {tol:e}")]
    DivisionNotExact { residual: f64, tol: f64 },

    /// The bracket handed to the refiner has no sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {flo:e}, f(hi) = {fhi:e})")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },

    /// The Wronskian of the mixture terms vanishes identically.
    #[error("mixture terms are numerically linearly dependent (Wronskian of order {order} vanishes)")]
    LinearlyDependentTerms { order: usize },

    /// The second term of an alpha analysis vanishes at a grid point.
    #[error("pivot term vanishes at x = {x}")]
    PivotVanishes { x: f64 },

    /// The eigenvalue iteration did not converge.
    #[error("eigenvalue iteration failed to converge")]
    EigenFailure,

    /// A realization has an eigenvalue with nonnegative real part.
    #[error("realization is not asymptotically stable (spectral abscissa {abscissa})")]
    NotStable { abscissa: f64 },

    /// The density of a realization does not integrate to one.
    #[error("density is not normalized (total mass {mass})")]
    NotNormalized { mass: f64 },

    /// An Erlang mixture has nonpositive signed mass.
    #[error("signed mass {mass} is not positive; mixture cannot be normalized")]
    NotNormalizable { mass: f64 },

    /// The tail of an EPT function could not be certified sign-constant.
    #[error("tail beyond the scan interval could not be resolved: {0}")]
    TailUnresolved(String),

    /// A mixture handed to a distance computation is not a valid density.
    #[error("mixture is not a valid probability density: {0}")]
    InvalidPdf(String),

    /// `phi_piece_integral` called with a zero slope.
    #[error("slope alpha must be nonzero")]
    AlphaZero,

    /// Structurally invalid input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors caused by the input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotStable { .. }
                | Error::NotNormalized { .. }
                | Error::NotNormalizable { .. }
                | Error::InvalidPdf(_)
                | Error::InvalidInput(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
