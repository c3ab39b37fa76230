use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("negative weight {value} at row {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No weighted case or no weighted control; the MLE does not exist.
    #[error("AllOneClass: the weighted data contain no case or no control")]
    AllOneClass,

    /// Iterates left the divergence bound, which happens when the data are separated.
    #[error("Separation: coefficient max-norm exceeded {bound} during Newton iteration")]
    Separation { bound: f64 },

    #[error("SingularHessian: Newton system is not solvable and the gradient is nonzero")]
    SingularHessian,

    #[error("NotConverged: gradient max-norm {grad_max_norm:.3e} after {iterations} iterations")]
    NotConverged { iterations: usize, grad_max_norm: f64 },

    #[error("NoControlsSelected: the under-sampled subsample contains no control")]
    NoControlsSelected,

    #[error("sampling design mismatch: {0}")]
    DesignMismatch(String),

    #[error("empty sample")]
    EmptySample,

    #[error("singular moment matrix (condition number {condition:.3e})")]
    SingularMatrix { condition: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    Asymmetric { asymmetry: f64 },

    #[error("no bracket for the intercept in [-50, 50]")]
    NoBracket,

    #[error("all {replications} replications failed for estimator {estimator}")]
    AllReplicationsFailed { estimator: String, replications: usize },
}

impl Error {
    /// True for failures of the numerics (solver or linear algebra) as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::AllOneClass
                | Error::Separation { .. }
                | Error::SingularHessian
                | Error::NotConverged { .. }
                | Error::NoControlsSelected
                | Error::SingularMatrix { .. }
                | Error::NoBracket
                | Error::AllReplicationsFailed { .. }
        )
    }
}
