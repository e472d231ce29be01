use crate::spectral::SpectrumClassification;

/// Errors raised by the library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested point lies in the spectrum, so no resolvent exists there.
    #[error("spectral error: {} lies in the spectrum ({})", .0.lambda, .0.verdict)]
    Spectral(Box<SpectrumClassification>),

    /// A numerical precondition failed when checked on a finite window.
    #[error("diagnostic error: {0}")]
    Diagnostic(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn diagnostic(msg: impl Into<String>) -> Self {
        Error::Diagnostic(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
