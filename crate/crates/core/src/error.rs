use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the expansion toolkit.
///
/// Variants split into two families: usage errors (bad arguments, mismatched
/// orders) and model/domain errors (singular scores, parameters outside their
/// domain). [`Error::is_usage`] tells them apart; the CLI maps them to
/// distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("singular input: {what} = {value:e} is below the invertibility threshold")]
    Singular { what: &'static str, value: f64 },

    #[error("requested order {requested} exceeds the supported maximum {max}")]
    Resource { requested: usize, max: usize },

    #[error("parameter outside its domain: {0}")]
    Domain(String),

    #[error("function is not invertible on the working interval: {0}")]
    NotInvertible(String),

    #[error("invalid remainder bound input: {0}")]
    InvalidBound(String),

    #[error("unsupported rate profile: {0}")]
    UnsupportedProfile(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
}

impl Error {
    /// True for errors caused by malformed arguments rather than by the model.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::OrderMismatch { .. }
                | Error::OutOfRange(_)
                | Error::Precondition(_)
                | Error::Empty(_)
                | Error::Resource { .. }
                | Error::UnsupportedProfile(_)
        )
    }
}
