use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A brute-force evaluation would exceed the configured term budget.
    #[error("budget exceeded: {needed} elementary terms required, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    /// The exact result is not a rational number.
    #[error("irrational result: {0}")]
    Irrational(String),
    /// Malformed external input.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
