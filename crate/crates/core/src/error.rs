use num_complex::Complex64;
use thiserror::Error;

use crate::model::ModelError;
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },
    #[error("pole of {function} at s = {at}")]
    Pole { function: &'static str, at: Complex64 },
    #[error("{function}: imaginary residue {residual:e} exceeds tolerance {tolerance:e}")]
    NotReal {
        function: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("index at λ = {lambda} evaluates to {value}, not an integer")]
    NonIntegralIndex { lambda: f64, value: f64 },
    #[error("eta data missing: {0}")]
    EtaDataMissing(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Self::Domain {
            function,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
