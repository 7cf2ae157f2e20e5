use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least 4 objects, got {0}")]
    TooFewObjects(usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("tree has {tree} leaves but cost table covers {table} objects")]
    DimensionMismatch { tree: usize, table: usize },

    /// Every pairing of every quartet has the same cost, so every tree is
    /// optimal and the normalized score is undefined.
    #[error("degenerate cost table: M = m = {0}")]
    DegenerateTable(f64),

    #[error("distance matrix is asymmetric at ({row}, {col}): {a} vs {b}")]
    Asymmetric { row: usize, col: usize, a: f64, b: f64 },

    #[error("invalid distance at ({row}, {col}): {value}")]
    InvalidDistance { row: usize, col: usize, value: f64 },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("duplicate quartet topology {0}")]
    DuplicateTopology(String),

    #[error("invalid quartet: {0}")]
    InvalidQuartet(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("n = {n} exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("no agreement among {runs} runs after {trees} examined trees (best per run: {best:?})")]
    AgreementTimeout {
        runs: usize,
        trees: u64,
        best: Vec<f64>,
    },

    #[error("compression failed for {label}: {source}")]
    Compression {
        label: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
