use thiserror::Error;

/// Errors raised by the exact engine, the sampler and the scenario runner.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("constant basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    #[error("sign of {0} cannot be decided from the declared constants")]
    SignUndecidable(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero vector: {0}")]
    ZeroVector(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty polyhedron: {0}")]
    EmptyPolyhedron(String),

    #[error("desk-scale limit exceeded: {0}")]
    DeskScaleExceeded(String),

    #[error("slice misses moment image: {0}")]
    SliceMissesImage(String),

    #[error("slice is not transverse to the face with support {support:?}")]
    NotTransverse { support: Vec<usize> },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("point is not on the model: {0}")]
    PointNotOnModel(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid local model ingredients: {0}")]
    InvalidIngredients(String),

    #[error("stratum with support {support:?} is not critical")]
    NotCritical { support: Vec<usize> },

    #[error("abelian vertex theorem requires compact X: {0}")]
    Unbounded(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("not of contact type: {0}")]
    NotContactType(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = MomentError> = std::result::Result<T, E>;
