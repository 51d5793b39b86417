use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid config: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("split layout {layout} does not match scheme {scheme}")]
    SplitLayout { layout: &'static str, scheme: String },
    #[error("scheme {0} has no Gaussian parameterization")]
    NoGaussianForm(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("label sets overlap on {0}")]
    Overlap(String),
    #[error("label {0} listed twice")]
    DuplicateLabel(String),
    #[error("covariance submatrix is not positive semidefinite (min pivot {0:e})")]
    NotPsd(f64),
    #[error("covariance submatrix is degenerate")]
    Degenerate,
    #[error("unbounded system: coordinate {0} has no upper bound")]
    Unbounded(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("sweep value {value} outside [0, {max}]")]
    SweepRange { value: f64, max: f64 },
    #[error("pmf has {cells} cells, above the cap of {cap}")]
    CellCap { cells: u128, cap: u128 },
    #[error("pmf parse error on line {line}: {reason}")]
    PmfParse { line: usize, reason: String },
    #[error("invalid pmf: {0}")]
    Pmf(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
