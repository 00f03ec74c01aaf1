//! Evaluation context: the deformation parameter and numeric tolerances.

use serde::{ Deserialize, Serialize };
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ContextError {
    #[error("deformation parameter must satisfy 0 < q <= 1, got {0}")]
    QOutOfRange(f64),

    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
}

/// Deformation parameter q ∈ (0, 1] plus the tolerances used when grouping
/// eigenvalues and discarding vanishing amplitudes.
///
/// Every q-dependent quantity in the crate is evaluated against one context;
/// q = 1 is the isotropic point and is handled by exact limit branches, never
/// by nudging q away from 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationContext {
    q: f64,
    eps_degeneracy: f64,
    eps_zero: f64,
}

impl DeformationContext {
    pub const DEFAULT_EPS_DEGENERACY: f64 = 1e-8;
    pub const DEFAULT_EPS_ZERO: f64 = 1e-12;

    pub fn new(q: f64) -> Result<Self, ContextError> {
        Self::with_tolerances(q, Self::DEFAULT_EPS_DEGENERACY, Self::DEFAULT_EPS_ZERO)
    }

    pub fn with_tolerances(q: f64, eps_degeneracy: f64, eps_zero: f64)
        -> Result<Self, ContextError>
    {
        if !(q > 0.0 && q <= 1.0) {
            return Err(ContextError::QOutOfRange(q));
        }
        if !(eps_degeneracy > 0.0) {
            return Err(ContextError::NonPositiveTolerance(eps_degeneracy));
        }
        if !(eps_zero > 0.0) {
            return Err(ContextError::NonPositiveTolerance(eps_zero));
        }
        Ok(Self { q, eps_degeneracy, eps_zero })
    }

    /// The isotropic context q = 1.
    pub fn isotropic() -> Self {
        Self::new(1.0).unwrap()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_isotropic(&self) -> bool {
        self.q == 1.0
    }

    pub fn eps_degeneracy(&self) -> f64 {
        self.eps_degeneracy
    }

    pub fn eps_zero(&self) -> f64 {
        self.eps_zero
    }
}
