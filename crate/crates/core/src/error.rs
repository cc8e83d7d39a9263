use thiserror::Error;

/// Errors raised by the subspace algebra, the precoder constructions and the
/// simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The target of a constrained solve does not lie in the column space of
    /// the system matrix.
    #[error("unsolvable system: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Unsolvable { residual: f64, tolerance: f64 },

    /// A jamming allocation asked for more dimensions than the channel offers.
    #[error("infeasible allocation: {0}")]
    InfeasibleAllocation(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
