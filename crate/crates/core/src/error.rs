use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {x} lies outside the domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("two-sided derivative requested at a kink (k = {0}); specify a side")]
    Kink(f64),

    #[error("invalid representation: {0}")]
    Representation(String),

    #[error("admissibility violation: {0}")]
    Admissibility(String),

    #[error("profile failed validation: {0}")]
    Validation(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("random profile generation exhausted {attempts} attempts (seed {seed})")]
    Generation { seed: u64, attempts: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("orbit search inconclusive: {0}")]
    Search(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("systolic inequality violated: ratio {ratio} exceeds bound {bound} (margin {margin})")]
    TheoremViolation { ratio: f64, bound: f64, margin: f64 },

    #[error("certificate violated at k = {k}: margin {margin}")]
    Certificate { k: f64, margin: f64 },

    #[error("transversality violated: moment map sample {index} is zero")]
    Transversality { index: usize },

    #[error("weights sum to {sum}, expected {expected}")]
    Normalization { sum: f64, expected: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed document: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by unreadable or malformed input rather than by
    /// a mathematical check failing.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Parse(_) | Error::Representation(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
