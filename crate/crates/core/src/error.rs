use thiserror::Error;

/// Errors raised by the blending library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlendError {
    #[error("matrix is singular: pivot {pivot:e} at column {column} below threshold {threshold:e}")]
    SingularMatrix {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("low degree {low} exceeds high degree {high}")]
    DegreeOrder { low: usize, high: usize },

    #[error("interval [{0}, {1}] does not match [{2}, {3}]")]
    IntervalMismatch(f64, f64, f64, f64),

    #[error("invalid interval [{0}, {1}]: need finite endpoints with b > a")]
    InvalidInterval(f64, f64),

    #[error("degree sequences are empty")]
    EmptyInput,

    #[error("sequence is not strictly increasing: {0:?}")]
    NotIncreasing(Vec<usize>),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("({i}, {j}) is not a point of the quasi-uniform grid")]
    NotInGrid { i: usize, j: usize },

    #[error("function returned non-finite value {value} at ({x}, {y})")]
    NonFiniteSample { x: f64, y: f64, value: f64 },

    #[error("need at least two rows with positive error to fit an order")]
    InsufficientData,

    #[error("cell ({p}, {q}): {source}")]
    Cell {
        p: usize,
        q: usize,
        #[source]
        source: Box<BlendError>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, BlendError>;
