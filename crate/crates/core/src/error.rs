use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("grid spacing too coarse: {0}")]
    SpecTooCoarse(String),
    #[error("active lattice splits into {components} components")]
    DisconnectedDomain { components: usize },
    #[error("no hole with index {index} (domain has {holes} holes)")]
    NoSuchHole { index: usize, holes: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("loop step {tail} -> {head} is not a lattice edge")]
    MissingEdge { tail: usize, head: usize },
    #[error("inconsistent sizes: {0}")]
    InconsistentSizes(String),
    #[error("bad slit: {0}")]
    BadSlit(String),
    #[error("circle operator needs at least 8 points, got {0}")]
    TooFewPoints(usize),
    #[error("invalid solver request: {0}")]
    InvalidRequest(String),
    #[error("eigensolver did not converge after {iterations} iterations (best residuals {residuals:?})")]
    NoConvergence { iterations: usize, residuals: Vec<f64> },
    #[error("shifted matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("circulation {value} of fundamental cycle is neither integer nor half-integer")]
    NonHalfIntegerFlux { value: f64 },
    #[error("holonomy mismatch {mismatch} on cover edge {edge} is not a multiple of 2π")]
    InconsistentHolonomy { edge: usize, mismatch: f64 },
    #[error("cover is disconnected (integer fluxes); no antisymmetric phase exists")]
    TrivialCover,
    #[error("could not build a K-fixed representative from the supplied basis")]
    DegenerateProjection,
    #[error("function has no sign change on the cover")]
    NoSignChange,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("slit family is empty")]
    EmptyFamily,
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
