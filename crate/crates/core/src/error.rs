use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid weight k = {k}: {reason}")]
    InvalidWeight { k: f64, reason: String },
    #[error("point is not inside the unit disk (|w| = {0})")]
    OutsideDisk(f64),
    #[error("point is not in the upper half plane (Im v = {0})")]
    OutsideHalfPlane(f64),
    #[error("matrix is not in SU(1,1): |a|^2 - |b|^2 = {0}")]
    NotSU11(f64),
    #[error("matrix is not in SL(2,R): det = {0}")]
    NotSL2(f64),
    #[error("kernel value overflows (log|K| = {0})")]
    KernelOverflow(f64),
    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),
    #[error("index ({n}, {m}) is too close to the cutoff to be reliable")]
    CutoffContamination { n: usize, m: usize },
    #[error("expansion needs index ({n}, {m}) outside the grid")]
    ExpansionOverflow { n: usize, m: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
