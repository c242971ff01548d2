use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("vector {0} of the subspace lies outside the ambient span")]
    ContainmentViolation(usize),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("degree {q} out of range for a {p}-fold product")]
    DegreeOutOfRange { p: usize, q: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("path does not close: {0}")]
    NonClosingPath(String),
    #[error("operator length {got} does not match {expected} qubits")]
    LengthMismatch { expected: usize, got: usize },
    #[error("membrane out of range: {0}")]
    SpecOutOfRange(String),
    #[error("unrecognized syndrome pattern: {0}")]
    UnrecognizedPattern(String),
    #[error("membranes do not share a vertical edge")]
    SpecsDoNotShareEdge,
    #[error("invalid cell {cell:?}: {reason}")]
    InvalidCell { cell: Vec<i64>, reason: String },
    #[error("offset out of range: {0}")]
    OffsetOutOfRange(String),
    #[error("lattice too small: {0}")]
    ShapeTooSmall(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("malformed manifest: {0}")]
    Manifest(String),
}

impl Error {
    pub(crate) fn invalid_cell(cell: &[i64], reason: impl Into<String>) -> Self {
        Error::InvalidCell {
            cell: cell.to_vec(),
            reason: reason.into(),
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::ContainmentViolation(_) => "ContainmentViolation",
            Error::InvalidSize(_) => "InvalidSize",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::NonClosingPath(_) => "NonClosingPath",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::SpecOutOfRange(_) => "SpecOutOfRange",
            Error::UnrecognizedPattern(_) => "UnrecognizedPattern",
            Error::SpecsDoNotShareEdge => "SpecsDoNotShareEdge",
            Error::InvalidCell { .. } => "InvalidCell",
            Error::OffsetOutOfRange(_) => "OffsetOutOfRange",
            Error::ShapeTooSmall(_) => "ShapeTooSmall",
            Error::InvalidPath(_) => "InvalidPath",
            Error::Manifest(_) => "Manifest",
        }
    }
}
