use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// `n + m·θ` vanishes, so the field strength is undefined.
    #[error("singular flux sector: |n + m*theta| = {denominator:e} is below {tolerance:e}")]
    SingularFlux { denominator: f64, tolerance: f64 },

    #[error("degenerate flux sector: {0}")]
    DegenerateSector(String),

    #[error("iteration did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("commutator is not a central phase (max deviation {deviation:e})")]
    NotCentralPhase { deviation: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("band edge root finding failed: {0}")]
    RootFindingFailure(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
