use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix has a zero dimension ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported BCH parameters ({n}, {k})")]
    UnsupportedBch { n: usize, k: usize },

    #[error("X and Z checks do not commute (row {x_row} of h_x, row {z_row} of h_z)")]
    NotOrthogonal { x_row: usize, z_row: usize },

    #[error("check rows {0} and {1} anticommute")]
    Anticommuting(usize, usize),

    #[error("column weight repair failed: {0}")]
    RepairFailed(String),

    #[error("distance search exceeded candidate budget of {0}")]
    SearchBudget(u64),

    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate beliefs at node {0}")]
    DegenerateNode(usize),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
