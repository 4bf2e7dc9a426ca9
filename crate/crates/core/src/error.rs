use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("director is not unit length (|n| - 1 = {0:e})")]
    NonUnitDirector(f64),
    #[error("director field is not unit length (max deviation {0:e})")]
    NonUnitField(f64),
    #[error("bulk parameters are degenerate: {0}")]
    DegenerateBulk(String),
    #[error("input is not in the range of H_n (discarded relative norm {0:e})")]
    NotInRange(f64),
    #[error("gamma1 is degenerate ({0})")]
    DegenerateGamma(f64),
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("Q0 is not a critical point (|T(Q0)| = {0:e})")]
    NotCritical(f64),
    #[error("advective CFL violated: {0:.3} > {1:.3}")]
    CflViolation(f64, f64),
    #[error("dt = {dt:e} exceeds the explicit stability bound {bound:e}")]
    StiffnessViolation { dt: f64, bound: f64 },
    #[error("state blew up at t = {0}")]
    StateBlowup(f64),
    #[error("need at least 3 points, got {0}")]
    InsufficientPoints(usize),
    #[error("errors must be positive (got {0:e})")]
    NonPositiveError(f64),
    #[error("coefficient certificate failed: {0}")]
    CertificateRefused(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("snapshot format: {0}")]
    Snapshot(String),
    #[error("io: {0}")]
    Io(String),
    #[error("at eps = {eps}: {source}")]
    AtEpsilon { eps: f64, source: Box<Error> },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
