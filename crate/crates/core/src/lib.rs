//! Contact analytic torsion and contact eta invariants of CR Seifert
//! manifolds with a unitary representation.
//!
//! Each invariant is available through several closed forms that are equal
//! as exact identities: an index series over the spectrum of the Reeb field,
//! a geometric special-function formula, and a dynamical sum over closed
//! Reeb orbits. The [`verify`] module checks these equalities numerically.

pub mod cli;
pub mod error;
pub mod eta;
pub mod model;
pub mod specfun;
pub mod torsion;
pub mod verify;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};

/// A value with an upper bound on its truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

impl Estimate {
    pub fn new(value: f64, error_bound: f64) -> Self {
        Self { value, error_bound }
    }
}
