use thiserror::Error;

/// Errors produced by the geometric operations and the document layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resolution mismatch: {left} vs {right}")]
    ResolutionMismatch { left: String, right: String },

    #[error("axis {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("resolution must be a positive rational, got {0}")]
    NonPositiveResolution(String),

    #[error("box has min > max on axis {axis}")]
    InvertedBox { axis: usize },

    #[error("negative length {0}")]
    NegativeLength(String),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),

    #[error("cell {0:?} is not in the set")]
    CellNotInSet(Vec<i64>),

    #[error("duplicate cell {0:?}")]
    DuplicateCell(Vec<i64>),

    #[error("empty input")]
    EmptyInput,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
