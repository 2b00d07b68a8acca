use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("algebras are not similar: {0}")]
    Dissimilar(String),
    #[error("{what} exceeded cap {cap} (explored {explored})")]
    CapExceeded {
        what: String,
        cap: usize,
        explored: usize,
    },
    #[error("hypothesis {name} fails: {witness}")]
    Hypothesis { name: String, witness: String },
    #[error("verification failed at {step}: {detail}")]
    Verification { step: String, detail: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn cap(what: impl Into<String>, cap: usize, explored: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap,
            explored,
        }
    }

    pub fn hypothesis(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Hypothesis {
            name: name.into(),
            witness: witness.into(),
        }
    }

    pub fn verification(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Verification {
            step: step.into(),
            detail: detail.into(),
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
