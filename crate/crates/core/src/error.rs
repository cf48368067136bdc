use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The state itself is unusable for the requested operation (e.g. unnormalized).
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    /// Photon count outside the supported range for an operation.
    #[error("photon count {n} outside supported range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
