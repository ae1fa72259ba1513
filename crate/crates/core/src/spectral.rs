//! Finite spectral measures and the finite/cofinite Borel sets they are
//! evaluated on.
//!
//! With a finite spectrum a projection-valued measure is determined by which
//! atoms a set contains, so sets are represented either by a finite list of
//! members or by a finite list of excluded points. That class is closed under
//! complement and union, which the construction of `G` relies on.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::{eigendecompose, CMatrix, EigenAtom, HermitianOperator, Projection};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    Finite,
    Cofinite,
}

/// A finite subset of ℝ, or the complement of one.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelDescriptor {
    kind: SetKind,
    values: Vec<f64>,
}

fn sorted_unique(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl BorelDescriptor {
    pub fn finite(values: impl IntoIterator<Item = f64>) -> Self {
        Self { kind: SetKind::Finite, values: sorted_unique(values) }
    }

    /// ℝ with the given points removed.
    pub fn cofinite(excluded: impl IntoIterator<Item = f64>) -> Self {
        Self { kind: SetKind::Cofinite, values: sorted_unique(excluded) }
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    pub fn reals() -> Self {
        Self::cofinite([])
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    /// The members (finite kind) or the excluded points (cofinite kind).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.kind == SetKind::Finite && self.values.is_empty()
    }

    pub fn complement(&self) -> Self {
        let kind = match self.kind {
            SetKind::Finite => SetKind::Cofinite,
            SetKind::Cofinite => SetKind::Finite,
        };
        Self { kind, values: self.values.clone() }
    }

    /// Membership with every listed value widened to a ball of `radius`.
    pub fn contains(&self, x: f64, radius: f64) -> bool {
        let listed = self.values.iter().any(|v| (v - x).abs() <= radius);
        match self.kind {
            SetKind::Finite => listed,
            SetKind::Cofinite => !listed,
        }
    }

    pub fn contains_zero(&self, radius: f64) -> bool {
        self.contains(0.0, radius)
    }

    /// Set union, with values compared exactly.
    pub fn union(&self, other: &Self) -> Self {
        use SetKind::*;
        match (self.kind, other.kind) {
            (Finite, Finite) => Self::finite(self.values.iter().chain(&other.values).copied()),
            (Cofinite, Cofinite) => Self::cofinite(self.values.iter().copied().filter(|v| other.values.contains(v))),
            (Finite, Cofinite) => Self::cofinite(other.values.iter().copied().filter(|v| !self.values.contains(v))),
            (Cofinite, Finite) => other.union(self),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().union(&other.complement()).complement()
    }

    /// Merges listed values closer than `radius` to their predecessor.
    pub fn dedup_within(&self, radius: f64) -> Self {
        let mut values: Vec<f64> = Vec::with_capacity(self.values.len());
        for &v in &self.values {
            if values.last().is_none_or(|last| v - last > radius) {
                values.push(v);
            }
        }
        Self { kind: self.kind, values }
    }
}

impl fmt::Display for BorelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            SetKind::Finite => "finite",
            SetKind::Cofinite => "cofinite",
        };
        write!(f, "{tag}{{")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed set `{input}`: {reason}")]
pub struct ParseSetError {
    pub input: String,
    pub reason: String,
}

impl FromStr for BorelDescriptor {
    type Err = ParseSetError;

    /// Parses `finite{v1,v2,...}` or `cofinite{v1,v2,...}`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let fail = |reason: &str| ParseSetError { input: s.to_string(), reason: reason.to_string() };
        let (kind, rest) = if let Some(rest) = compact.strip_prefix("finite") {
            (SetKind::Finite, rest)
        } else if let Some(rest) = compact.strip_prefix("cofinite") {
            (SetKind::Cofinite, rest)
        } else {
            return Err(fail("expected `finite{...}` or `cofinite{...}`"));
        };
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| fail("values must be enclosed in braces"))?;
        let mut values = Vec::new();
        if !body.is_empty() {
            for item in body.split(',') {
                let v: f64 = item.parse().map_err(|_| fail(&format!("`{item}` is not a number")))?;
                if !v.is_finite() {
                    return Err(fail(&format!("`{item}` is not finite")));
                }
                values.push(v);
            }
        }
        Ok(match kind {
            SetKind::Finite => Self::finite(values),
            SetKind::Cofinite => Self::cofinite(values),
        })
    }
}

/// `(value, projection)` atoms with strictly increasing values whose
/// projections are mutually orthogonal and resolve the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpectralMeasure {
    dim: usize,
    atoms: Vec<EigenAtom>,
}

impl FiniteSpectralMeasure {
    pub fn new(dim: usize, atoms: Vec<EigenAtom>, tol: &Tolerances) -> Result<Self> {
        ensure_same_dim(std::iter::once(dim).chain(atoms.iter().map(|a| a.projection.dim())))?;
        for pair in atoms.windows(2) {
            if pair[0].value.partial_cmp(&pair[1].value) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidMeasure(format!(
                    "atom values must be strictly increasing ({} then {})",
                    pair[0].value, pair[1].value
                )));
            }
        }
        let mut total = CMatrix::zeros(dim, dim);
        for (i, a) in atoms.iter().enumerate() {
            total += a.projection.matrix();
            for b in &atoms[i + 1..] {
                let overlap = (a.projection.matrix() * b.projection.matrix()).norm();
                if overlap > tol.tol_proj {
                    return Err(Error::InvalidMeasure(format!(
                        "atoms at {} and {} overlap: ‖PQ‖_F = {overlap:e}",
                        a.value, b.value
                    )));
                }
            }
        }
        let deficit = (total - CMatrix::identity(dim, dim)).norm();
        if deficit > tol.tol_proj {
            return Err(Error::InvalidMeasure(format!("atoms do not sum to I: residual {deficit:e}")));
        }
        Ok(Self { dim, atoms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[EigenAtom] {
        &self.atoms
    }

    /// Largest |value| over the atoms.
    pub fn scale(&self) -> f64 {
        self.atoms.iter().fold(0.0_f64, |acc, a| acc.max(a.value.abs()))
    }

    pub fn zero_atom(&self) -> Option<&EigenAtom> {
        self.atoms.iter().find(|a| a.value == 0.0)
    }

    /// `Σ λ P_λ`.
    pub fn operator(&self) -> HermitianOperator {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for a in &self.atoms {
            m += a.projection.matrix().scale(a.value);
        }
        HermitianOperator::from_matrix_unchecked(m)
    }

    /// `P(Δ)` with membership tested at the measure's own clustering radius.
    pub fn evaluate(&self, delta: &BorelDescriptor, tol: &Tolerances) -> Projection {
        self.evaluate_with_radius(delta, tol.eig_radius(self.scale()))
    }

    pub fn evaluate_with_radius(&self, delta: &BorelDescriptor, radius: f64) -> Projection {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for a in self.atoms.iter().filter(|a| delta.contains(a.value, radius)) {
            m += a.projection.matrix();
        }
        Projection::from_matrix_unchecked(m)
    }

    /// Atom values other than 0, ascending.
    pub fn support_nonzero(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.value).filter(|&v| v != 0.0).collect()
    }
}

/// The spectral measure `P^A` built from the clustered eigendecomposition.
pub fn measure_of(a: &HermitianOperator, tol: &Tolerances) -> Result<FiniteSpectralMeasure> {
    Ok(FiniteSpectralMeasure { dim: a.dim(), atoms: eigendecompose(a, tol)? })
}

/// Clustering radius used when identifying spectral values across a family.
pub(crate) fn family_radius(family: &[FiniteSpectralMeasure], tol: &Tolerances) -> f64 {
    tol.eig_radius(family.iter().fold(0.0_f64, |acc, m| acc.max(m.scale())))
}

/// Union of the nonzero spectral values of the family, ascending.
///
/// Values are grouped greedily: a group starts at its smallest member and
/// absorbs everything within the clustering radius of that start. Each group
/// is represented by its mean, which is therefore within the radius of every
/// member.
pub fn joint_value_grid(family: &[FiniteSpectralMeasure], tol: &Tolerances) -> Result<Vec<f64>> {
    ensure_same_dim(family.iter().map(FiniteSpectralMeasure::dim))?.ok_or(Error::EmptyFamily)?;
    let radius = family_radius(family, tol);
    let mut values: Vec<f64> = family.iter().flat_map(|m| m.support_nonzero()).collect();
    values.sort_by(f64::total_cmp);

    let mut grid = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for v in values {
        if let Some(&start) = group.first() {
            if v - start > radius {
                grid.push(group.iter().sum::<f64>() / group.len() as f64);
                group.clear();
            }
        }
        group.push(v);
    }
    if !group.is_empty() {
        grid.push(group.iter().sum::<f64>() / group.len() as f64);
    }
    Ok(grid)
}
