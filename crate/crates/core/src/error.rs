use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("conflicting values for pair ({i}, {j})")]
    AsymmetricDuplicate { i: usize, j: usize },
    #[error("duplicate entry ({i}, {j})")]
    DuplicateEntry { i: usize, j: usize },
    #[error("input matrix is not square")]
    NonSquareInput,
    #[error("not a semi-metric: {0}")]
    NotADistance(String),
    #[error("not a semi-cohesion measure: {0}")]
    NotACohesion(String),
    #[error("need at least two points")]
    TooFewPoints,
    #[error("sigma {sigma} is below the minimum {minimum}")]
    SigmaTooSmall { sigma: f64, minimum: f64 },
    #[error("point set is empty")]
    EmptySet,
    #[error("set {0} of the partition is empty")]
    EmptySetInPartition(usize),
    #[error("moving point {point} would empty set {set}")]
    WouldEmptySet { point: usize, set: usize },
    #[error("K = {k} out of range for {n} points (need 2 <= K <= n)")]
    KOutOfRange { k: usize, n: usize },
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    CoordinateOutOfRange { lat: f64, lon: f64 },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line() as usize);
        Error::Parse { line, msg: e.to_string() }
    }
}
