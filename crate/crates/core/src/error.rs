use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("evaluation overflow at term {term}")]
    Overflow { term: usize },

    #[error("ill-conditioned evaluation: {0}")]
    IllConditioned(String),

    #[error("inadmissible eigenpair (n={n}, l={l}): {reason}")]
    Inadmissible { n: usize, l: usize, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("ill-conditioned fit for mode (l={l}, m={m}): no usable probe radius")]
    IllConditionedFit { l: usize, m: usize },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Inadmissible { .. }
                | Error::Unsupported(_)
                | Error::IllConditionedFit { .. }
                | Error::GridTooCoarse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
