use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("map is not a bijection of X x X")]
    NotBijective,
    #[error("map is degenerate: {0}")]
    Degenerate(String),
    #[error("map does not satisfy the braid relation")]
    NotBraided,
    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("braid generator index {index} out of range for {k} strands")]
    BadIndex { index: i64, k: usize },
    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("malformed group tables: {0}")]
    MalformedTables(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("bad perturbation: {0}")]
    BadPerturbation(String),
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedTable(_) => "MalformedTable",
            Error::NotBijective => "NotBijective",
            Error::Degenerate(_) => "Degenerate",
            Error::NotBraided => "NotBraided",
            Error::TooLarge { .. } => "TooLarge",
            Error::BadIndex { .. } => "BadIndex",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::MalformedTables(_) => "MalformedTables",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::NotAnAutomorphism(_) => "NotAnAutomorphism",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotASolution(_) => "NotASolution",
            Error::BadPerturbation(_) => "BadPerturbation",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::Unsupported(_) => "Unsupported",
            Error::Parse(_) => "Parse",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
