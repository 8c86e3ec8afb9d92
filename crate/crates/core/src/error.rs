use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capacity exceeded: {what} = {requested}, maximum is {max}")]
    Capacity {
        what: &'static str,
        requested: usize,
        max: usize,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not antisymmetric (max |Γ + Γᵀ| = {max_deviation:e})")]
    Asymmetric { max_deviation: f64 },

    #[error("covariance matrix is unphysical (max singular value {max_singular_value} > 1)")]
    Unphysical { max_singular_value: f64 },

    #[error("invalid mode index {index} for {n_modes} modes")]
    ModeIndex { index: usize, n_modes: usize },

    #[error("operator is not Gaussian: {0}")]
    Representation(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("input does not have the required pattern: {0}")]
    Pattern(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}
