use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("integrand returned NaN at x = {0}")]
    NanIntegrand(f64),

    #[error("series in {func} did not converge after {terms} terms")]
    SeriesDivergence { func: &'static str, terms: usize },

    #[error("{func}: {retries} consecutive non-finite samples")]
    SampleRetries { func: &'static str, retries: usize },

    #[error("integral diverges")]
    Divergent,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("identity {id}: {side} side failed: {msg}")]
    Identity { id: String, side: &'static str, msg: String },
}

impl Error {
    pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { func, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
