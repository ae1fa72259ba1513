//! The numeric order `≤` and the logic order `⪯`.
//!
//! `⪯` is decided two independent ways: algebraically from the forced witness
//! `C = B − A` (`A ⪯ B` iff `AC = 0`), and spectrally by comparing the
//! eigenprojections of `A` at its nonzero values with those of `B`. All
//! residuals are normalised so that each test passes iff its residual is at
//! most `tol_residual`.

use crate::error::{ensure_same_dim, Result};
use crate::linalg::{is_psd, subprojection_residual, HermitianOperator};
use crate::spectral::{family_radius, measure_of, BorelDescriptor, FiniteSpectralMeasure};
use crate::tolerances::Tolerances;

pub fn is_numeric_leq(a: &HermitianOperator, b: &HermitianOperator, tol: &Tolerances) -> Result<bool> {
    ensure_same_dim([a.dim(), b.dim()])?;
    is_psd(&(b - a), tol)
}

/// `‖A(B − A)‖_F / max(1, ‖A‖_F ‖B − A‖_F)`.
pub fn logic_leq_algebraic_residual(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    ensure_same_dim([a.dim(), b.dim()])?;
    let c = b - a;
    let scale = (a.frobenius_norm() * c.frobenius_norm()).max(1.0);
    Ok((a * &c).norm() / scale)
}

pub fn is_logic_leq_algebraic(a: &HermitianOperator, b: &HermitianOperator, tol: &Tolerances) -> Result<bool> {
    Ok(logic_leq_algebraic_residual(a, b)? <= tol.tol_residual)
}

/// Worst `‖P^B({λ}) P^A({λ}) − P^A({λ})‖_F / dim` over the nonzero atoms `λ` of `A`.
///
/// Checking singletons is enough: both measures are additive, so domination
/// on each nonzero atom extends to every set avoiding 0.
pub fn logic_leq_spectral_residual_of(
    ma: &FiniteSpectralMeasure,
    mb: &FiniteSpectralMeasure,
    tol: &Tolerances,
) -> Result<f64> {
    ensure_same_dim([ma.dim(), mb.dim()])?;
    let radius = family_radius(&[ma.clone(), mb.clone()], tol);
    let mut worst = 0.0_f64;
    for atom in ma.atoms().iter().filter(|a| a.value != 0.0) {
        let target = mb.evaluate_with_radius(&BorelDescriptor::finite([atom.value]), radius);
        let r = subprojection_residual(&atom.projection, &target)? / ma.dim() as f64;
        worst = worst.max(r);
    }
    Ok(worst)
}

pub fn logic_leq_spectral_residual(a: &HermitianOperator, b: &HermitianOperator, tol: &Tolerances) -> Result<f64> {
    ensure_same_dim([a.dim(), b.dim()])?;
    logic_leq_spectral_residual_of(&measure_of(a, tol)?, &measure_of(b, tol)?, tol)
}

pub fn is_logic_leq_spectral(a: &HermitianOperator, b: &HermitianOperator, tol: &Tolerances) -> Result<bool> {
    Ok(logic_leq_spectral_residual(a, b, tol)? <= tol.tol_residual)
}

/// `A ⪯ B` by both tests.
pub fn is_logic_leq(a: &HermitianOperator, b: &HermitianOperator, tol: &Tolerances) -> Result<bool> {
    Ok(compare(a, b, tol)?.logic_leq())
}

/// Every order verdict for one pair, with the residuals behind them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderReport {
    pub numeric_leq: bool,
    /// Smallest eigenvalue of `B − A`.
    pub numeric_min_eigenvalue: f64,
    pub algebraic_residual: f64,
    pub algebraic: bool,
    pub spectral_residual: f64,
    pub spectral: bool,
}

impl OrderReport {
    pub fn logic_leq(&self) -> bool {
        self.algebraic && self.spectral
    }

    pub fn tests_disagree(&self) -> bool {
        self.algebraic != self.spectral
    }
}

pub fn compare(a: &HermitianOperator, b: &HermitianOperator, tol: &Tolerances) -> Result<OrderReport> {
    ensure_same_dim([a.dim(), b.dim()])?;
    let algebraic_residual = logic_leq_algebraic_residual(a, b)?;
    let spectral_residual = logic_leq_spectral_residual(a, b, tol)?;
    Ok(OrderReport {
        numeric_leq: is_numeric_leq(a, b, tol)?,
        numeric_min_eigenvalue: (b - a).eigenvalues()?[0],
        algebraic_residual,
        algebraic: algebraic_residual <= tol.tol_residual,
        spectral_residual,
        spectral: spectral_residual <= tol.tol_residual,
    })
}
