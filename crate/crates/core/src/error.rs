use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("frequency grid too small: M = {m}, need at least {required}")]
    GridTooSmall { m: u64, required: u64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("{0} is not a member of the set")]
    NotMember(u64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invariant violated: {0}")]
    Violation(Box<Violation>),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

/// A provable inequality or postcondition that failed at runtime, with the
/// numbers needed to reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub check: &'static str,
    pub message: String,
    pub values: Vec<(String, f64)>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.message)?;
        for (k, v) in &self.values {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}
