use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: ‖A − A*‖_F = {residual:e} exceeds {limit:e}")]
    NonHermitianInput { residual: f64, limit: f64 },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("matrix is not an orthogonal projection: {0}")]
    NotAProjection(String),
    #[error("basis vectors are not orthonormal: deviation {deviation:e}")]
    NotOrthonormal { deviation: f64 },
    #[error("Hermitian eigensolver did not converge for a {dim}x{dim} matrix")]
    EigenFailure { dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator family is empty")]
    EmptyFamily,
    #[error("{atoms} atoms exceed the partition cap of {cap} (exhaustive scan would need {required} partitions)")]
    CapExceeded { atoms: usize, cap: usize, required: u128 },
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
    #[error("invalid spectral measure: {0}")]
    InvalidMeasure(String),
}

/// Checks that every dimension in `dims` equals the first one.
pub(crate) fn ensure_same_dim(dims: impl IntoIterator<Item = usize>) -> Result<Option<usize>> {
    let mut expected = None;
    for d in dims {
        match expected {
            None => expected = Some(d),
            Some(e) if e != d => return Err(Error::DimensionMismatch { expected: e, found: d }),
            Some(_) => {}
        }
    }
    Ok(expected)
}
