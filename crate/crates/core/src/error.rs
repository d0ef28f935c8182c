use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Normalisation requested at (numerically) the origin.
    #[error("normalisation is undefined at the origin (norm {norm:e})")]
    OriginUndefined { norm: f64 },

    #[error("rotation angle is within the cut-locus band around pi (trace {trace})")]
    AngleNearPi { trace: f64 },

    #[error("frame is degenerate: projected second vector has norm {norm:e}")]
    DegenerateFrame { norm: f64 },

    #[error("matrix is not a rotation: orthogonality defect {orthogonality:e}, det {det}")]
    NotARotation { orthogonality: f64, det: f64 },

    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("point is too close to the manifold or its singular set (distance {distance:e}, minimum {minimum:e})")]
    TooCloseToManifold { distance: f64, minimum: f64 },

    #[error("metric projection is not unique at this point")]
    NonUnique,

    #[error("path step {step} rad is too large for a well-defined lift (limit {limit})")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("head input norm {norm:e} is below the singular-set guard")]
    NearSingularHead { norm: f64 },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("encoder failed at path index {index}: {source}")]
    EncoderFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("loss diverged at step {step} (loss {loss:e}, initial {initial:e})")]
    DivergedLoss { step: usize, loss: f64, initial: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
