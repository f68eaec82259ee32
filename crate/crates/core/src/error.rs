use thiserror::Error;

/// Everything that can go wrong while building or checking an identity.
///
/// `DivisionByZero`, `DegenerateSample` and `SingularCorner` all mean that the
/// sampled point sits on a hyperplane where some formula has a pole; callers
/// drop the sample and draw a fresh one (see [`Error::is_degenerate`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("singular Gauss corner at index {0}")]
    SingularCorner(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

impl Error {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::DivisionByZero | Error::DegenerateSample(_) | Error::SingularCorner(_))
    }

    pub(crate) fn degenerate(what: impl Into<String>) -> Self {
        Error::DegenerateSample(what.into())
    }

    pub(crate) fn shape(what: impl Into<String>) -> Self {
        Error::ShapeMismatch(what.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
