//! Numerical thresholds shared by every module.
//!
//! Spectral values coming out of a floating-point eigensolver are never exact,
//! so every decision that the exact theory makes by equality (two eigenvalues
//! coincide, a value is zero, a vector lies in a subspace) is made here against
//! one of these radii instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalue clustering radius, relative to `max(1, ‖A‖)`.
    pub tol_eig: f64,
    /// Eigenvalue threshold for kernel/rank decisions.
    pub tol_rank: f64,
    /// Radius around 0 inside which a spectral value is snapped to 0, relative to `max(1, ‖A‖)`.
    pub tol_zero: f64,
    pub tol_herm: f64,
    pub tol_proj: f64,
    pub tol_orth: f64,
    pub tol_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_eig: 1e-9,
            tol_rank: 1e-8,
            tol_zero: 1e-9,
            tol_herm: 1e-8,
            tol_proj: 1e-8,
            tol_orth: 1e-8,
            tol_residual: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("tol_eig", self.tol_eig),
            ("tol_rank", self.tol_rank),
            ("tol_zero", self.tol_zero),
            ("tol_herm", self.tol_herm),
            ("tol_proj", self.tol_proj),
            ("tol_orth", self.tol_orth),
            ("tol_residual", self.tol_residual),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerances(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        if self.tol_zero < self.tol_eig {
            return Err(Error::InvalidTolerances(format!(
                "tol_zero ({}) must be at least tol_eig ({})",
                self.tol_zero, self.tol_eig
            )));
        }
        Ok(())
    }

    /// Absolute clustering radius for spectral values of magnitude up to `scale`.
    pub fn eig_radius(&self, scale: f64) -> f64 {
        self.tol_eig * scale.max(1.0)
    }

    /// Absolute zero-snapping radius for spectral values of magnitude up to `scale`.
    pub fn zero_radius(&self, scale: f64) -> f64 {
        self.tol_zero * scale.max(1.0)
    }
}
