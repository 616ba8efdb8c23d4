use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("level {k} out of range {lo}..={hi}")]
    LevelOutOfRange { k: usize, lo: usize, hi: usize },
    #[error("(u|r) = {0} is nonzero but the sl_n-module carries no identity scalar")]
    MissingIdScalar(String),
    #[error("action style mismatch: module uses {module}, operation needs {needed}")]
    StyleMismatch { module: &'static str, needed: &'static str },
    #[error("operation requires an exterior-power module, got {0}")]
    NotExterior(String),
    #[error("weights of {0} are not congruent to the given lambda modulo Z^n")]
    WeightLattice(String),
    #[error("window margin {margin} is smaller than depth*bound = {needed}")]
    MarginViolation { margin: i32, needed: i32 },
    #[error("interpolation grid: {0}")]
    Grid(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
