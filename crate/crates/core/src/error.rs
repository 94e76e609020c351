use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} points vs {right} points")]
    Dimension { left: usize, right: usize },

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// No closed form is available; the exact oracle can still answer.
    #[error("no closed form for {0}; run the exact oracle instead")]
    ClosedFormGap(String),

    #[error("characteristic {p} is too small for degree {degree}")]
    Characteristic { p: u64, degree: i64 },

    #[error("could not draw points in general position after {attempts} attempts")]
    Degeneracy { attempts: usize },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("integer {0} does not fit in 64 bits")]
    Overflow(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
