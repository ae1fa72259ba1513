//! Dense complex Hermitian arithmetic: operators, orthogonal projections,
//! subspaces, clustered eigendecomposition and the projection-lattice meet.
//!
//! Everything is backed by `nalgebra::DMatrix<Complex64>`. Real inputs are
//! embedded with zero imaginary parts.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{ensure_same_dim, Error, Result};
use crate::tolerances::Tolerances;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols || rows == 0 {
        return Err(Error::BadShape { rows, cols });
    }
    Ok(rows)
}

/// Eigenvalues in ascending order with the matching unit eigenvectors as columns.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    let eig = m.clone().try_symmetric_eigen(f64::EPSILON, 1000 * n.max(1)).ok_or(Error::EigenFailure { dim: n })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// Modified Gram–Schmidt with one re-orthogonalization pass. Columns whose
/// residual norm falls below `drop_tol` are discarded, so the result has
/// orthonormal columns spanning the input's column space.
pub fn orthonormalize_columns(m: &CMatrix, drop_tol: f64) -> CMatrix {
    let n = m.nrows();
    let mut kept: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &kept {
                let coeff = q.dotc(&v);
                v -= q * coeff;
            }
        }
        let norm = v.norm();
        if norm > drop_tol {
            kept.push(v.unscale(norm));
        }
    }
    CMatrix::from_fn(n, kept.len(), |r, c| kept[c][r])
}

/// A finite-dimensional bounded self-adjoint operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Accepts `matrix` if it is Hermitian up to `tol_herm · max(1, ‖A‖_F)`,
    /// storing its exact Hermitian part.
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square(&matrix)?;
        for r in 0..matrix.nrows() {
            for c in 0..matrix.ncols() {
                let z = matrix[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFiniteEntry { row: r, col: c });
                }
            }
        }
        let residual = (&matrix - matrix.adjoint()).norm();
        let limit = tol.tol_herm * matrix.norm().max(1.0);
        if residual > limit {
            return Err(Error::NonHermitianInput { residual, limit });
        }
        Ok(Self { matrix: hermitian_part(&matrix) })
    }

    /// For matrices that are Hermitian by construction; only the Hermitian part is kept.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix: hermitian_part(&matrix) }
    }

    pub fn from_real_rows(rows: &[Vec<f64>], tol: &Tolerances) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::BadShape { rows: n, cols: bad.len() });
        }
        Self::new(CMatrix::from_fn(n, n, |r, c| real(rows[r][c])), tol)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0, "operator dimension must be positive");
        Self { matrix: CMatrix::from_fn(n, n, |r, c| if r == c { real(values[r]) } else { ZERO }) }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self { matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Operator (spectral) norm, the largest |eigenvalue|.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
    }

    /// Unclustered eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.matrix)?.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.scale(factor) }
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul for &HermitianOperator {
    type Output = CMatrix;
    fn mul(self, rhs: Self) -> CMatrix {
        &self.matrix * &rhs.matrix
    }
}

/// An orthogonal projection `P = P² = P*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: CMatrix,
}

impl Projection {
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square(&matrix)?;
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > tol.tol_proj {
            return Err(Error::NotAProjection(format!("‖P − P*‖_F = {herm:e}")));
        }
        let matrix = hermitian_part(&matrix);
        let idem = (&matrix * &matrix - &matrix).norm();
        if idem > tol.tol_proj {
            return Err(Error::NotAProjection(format!("‖P² − P‖_F = {idem:e}")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix: hermitian_part(&matrix) }
    }

    /// Projection onto the span of the orthonormal columns of `basis`.
    pub(crate) fn from_orthonormal_columns(dim: usize, basis: &CMatrix) -> Self {
        if basis.ncols() == 0 {
            return Self::zeros(dim);
        }
        Self::from_matrix_unchecked(basis * basis.adjoint())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim) }
    }

    /// Diagonal 0/1 projection selecting the coordinates where `mask` is true.
    pub fn coordinate(mask: &[bool]) -> Self {
        let n = mask.len();
        Self { matrix: CMatrix::from_fn(n, n, |r, c| if r == c && mask[r] { ONE } else { ZERO }) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn rank(&self) -> usize {
        self.trace().round().max(0.0) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn complement(&self) -> Self {
        let n = self.dim();
        Self { matrix: CMatrix::identity(n, n) - &self.matrix }
    }

    pub fn as_operator(&self) -> HermitianOperator {
        HermitianOperator { matrix: self.matrix.clone() }
    }

    pub fn range(&self) -> Subspace {
        Subspace::from_projection(self)
    }
}

/// Orthonormal basis of a subspace of `C^dim`, stored as matrix columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    dim: usize,
    basis: CMatrix,
}

impl Subspace {
    pub fn new(basis: CMatrix, tol: &Tolerances) -> Result<Self> {
        let dim = basis.nrows();
        if dim == 0 {
            return Err(Error::BadShape { rows: 0, cols: basis.ncols() });
        }
        let k = basis.ncols();
        let deviation = (basis.adjoint() * &basis - CMatrix::identity(k, k)).norm();
        if deviation > tol.tol_orth {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { dim, basis })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: CMatrix::zeros(dim, 0) }
    }

    /// Span of arbitrary column vectors; columns that are numerically dependent
    /// (residual below `tol_rank`) are dropped.
    pub fn span(vectors: &CMatrix, tol: &Tolerances) -> Self {
        Self { dim: vectors.nrows(), basis: orthonormalize_columns(vectors, tol.tol_rank) }
    }

    pub fn from_projection(p: &Projection) -> Self {
        // A valid projection has eigenvalues clustered at 0 and 1.
        let (values, vectors) = hermitian_eigen(p.matrix()).expect("projection eigendecomposition");
        let cols: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.5).collect();
        Self { dim: p.dim(), basis: select_columns(&vectors, &cols) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projection(&self) -> Projection {
        Projection::from_orthonormal_columns(self.dim, &self.basis)
    }
}

/// One cluster of the spectrum: a spectral value and its eigenprojection.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenAtom {
    pub value: f64,
    pub projection: Projection,
}

/// Spectral decomposition `A = Σ λ P_λ` with near-equal eigenvalues merged.
///
/// Eigenvalues within `tol_eig · max(1, ‖A‖)` of their neighbour share a
/// cluster whose value is the cluster mean. Clusters touching the zero radius
/// are merged into a single atom with value exactly 0.
pub fn eigendecompose(a: &HermitianOperator, tol: &Tolerances) -> Result<Vec<EigenAtom>> {
    let (values, vectors) = hermitian_eigen(a.matrix())?;
    let scale = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let eig_radius = tol.eig_radius(scale);
    let zero_radius = tol.zero_radius(scale);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if v - values[*last.last().unwrap()] <= eig_radius => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut merged: Vec<(f64, Vec<usize>)> = Vec::new();
    for cluster in clusters {
        let touches_zero = cluster.iter().any(|&i| values[i].abs() <= zero_radius);
        if touches_zero {
            if let Some((value, members)) = merged.last_mut() {
                if *value == 0.0 {
                    members.extend(cluster);
                    continue;
                }
            }
            merged.push((0.0, cluster));
        } else {
            let mean = cluster.iter().map(|&i| values[i]).sum::<f64>() / cluster.len() as f64;
            merged.push((mean, cluster));
        }
    }

    let n = a.dim();
    Ok(merged
        .into_iter()
        .map(|(value, members)| EigenAtom {
            value,
            projection: Projection::from_orthonormal_columns(n, &select_columns(&vectors, &members)),
        })
        .collect())
}

/// Accumulates `M = Σ (I − P_i)`; the meet of the `P_i` is the projection onto
/// the numerical kernel of `M`.
#[derive(Debug, Clone)]
pub struct MeetAccumulator {
    sum: CMatrix,
    count: usize,
}

impl MeetAccumulator {
    pub fn new(dim: usize) -> Self {
        Self { sum: CMatrix::zeros(dim, dim), count: 0 }
    }

    pub fn dim(&self) -> usize {
        self.sum.nrows()
    }

    pub fn push(&mut self, p: &Projection) -> Result<()> {
        self.push_matrix(p.matrix())
    }

    /// Adds a term `I − S` for a Hermitian `S` that is a projection in exact
    /// arithmetic (for instance a sum of mutually orthogonal projections).
    pub(crate) fn push_matrix(&mut self, s: &CMatrix) -> Result<()> {
        ensure_same_dim([self.dim(), s.nrows()])?;
        self.sum -= s;
        for i in 0..self.dim() {
            self.sum[(i, i)] += ONE;
        }
        self.count += 1;
        Ok(())
    }

    pub fn finish(self, tol: &Tolerances) -> Result<Projection> {
        let n = self.dim();
        if self.count == 0 {
            return Err(Error::EmptyFamily);
        }
        let (values, vectors) = hermitian_eigen(&hermitian_part(&self.sum))?;
        let cols: Vec<usize> = (0..n).filter(|&i| values[i] <= tol.tol_rank).collect();
        Ok(Projection::from_orthonormal_columns(n, &select_columns(&vectors, &cols)))
    }
}

/// Projection onto the intersection of the ranges of `ps`.
pub fn meet_projections(ps: &[Projection], tol: &Tolerances) -> Result<Projection> {
    let dim = ensure_same_dim(ps.iter().map(Projection::dim))?.ok_or(Error::EmptyFamily)?;
    if ps.len() == 1 {
        return Ok(ps[0].clone());
    }
    let mut acc = MeetAccumulator::new(dim);
    for p in ps {
        acc.push(p)?;
    }
    acc.finish(tol)
}

/// `‖QP − P‖_F`, zero exactly when `range(P) ⊆ range(Q)`.
pub fn subprojection_residual(p: &Projection, q: &Projection) -> Result<f64> {
    ensure_same_dim([p.dim(), q.dim()])?;
    Ok((q.matrix() * p.matrix() - p.matrix()).norm())
}

pub fn is_subprojection(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<bool> {
    Ok(subprojection_residual(p, q)? <= tol.tol_residual * p.dim() as f64)
}

/// Membership in the positive cone: `min λ ≥ −tol_rank · max(1, ‖A‖)`.
pub fn is_psd(a: &HermitianOperator, tol: &Tolerances) -> Result<bool> {
    let values = a.eigenvalues()?;
    let norm = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    Ok(values[0] >= -tol.tol_rank * norm.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn cmat(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        CMatrix::from_fn(n, rows[0].len(), |r, c| real(rows[r][c]))
    }

    fn proj(rows: &[&[f64]]) -> Projection {
        Projection::new(cmat(rows), &tol()).unwrap()
    }

    fn diag_line() -> Projection {
        proj(&[&[0.5, 0.5], &[0.5, 0.5]])
    }

    fn close(a: &CMatrix, b: &CMatrix, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    #[test]
    fn rejects_non_hermitian_and_bad_shapes() {
        let err = HermitianOperator::new(cmat(&[&[0.0, 1.0], &[0.0, 0.0]]), &tol()).unwrap_err();
        assert!(matches!(err, Error::NonHermitianInput { .. }));
        let err = HermitianOperator::new(CMatrix::zeros(2, 3), &tol()).unwrap_err();
        assert!(matches!(err, Error::BadShape { .. }));
        let mut m = CMatrix::identity(2, 2);
        m[(1, 0)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(HermitianOperator::new(m, &tol()), Err(Error::NonFiniteEntry { .. })));
    }

    #[test]
    fn symmetrizes_tiny_asymmetry() {
        let m = cmat(&[&[1.0, 1.0 + 1e-12], &[1.0, 1.0]]);
        let a = HermitianOperator::new(m, &tol()).unwrap();
        assert_eq!(a.matrix()[(0, 1)], a.matrix()[(1, 0)].conj());
    }

    #[test]
    fn eigendecompose_diagonal_merges_repeated_values() {
        let atoms = eigendecompose(&HermitianOperator::diagonal(&[2.0, 2.0, 5.0]), &tol()).unwrap();
        assert_eq!(atoms.len(), 2);
        assert!((atoms[0].value - 2.0).abs() < 1e-14);
        assert!((atoms[1].value - 5.0).abs() < 1e-14);
        assert!(close(atoms[0].projection.matrix(), Projection::coordinate(&[true, true, false]).matrix(), 1e-12));
        assert!(close(atoms[1].projection.matrix(), Projection::coordinate(&[false, false, true]).matrix(), 1e-12));
    }

    #[test]
    fn eigendecompose_identity_is_single_atom() {
        let atoms = eigendecompose(&HermitianOperator::identity(3), &tol()).unwrap();
        assert_eq!(atoms.len(), 1);
        assert!((atoms[0].value - 1.0).abs() < 1e-14);
        assert!(close(atoms[0].projection.matrix(), &CMatrix::identity(3, 3), 1e-12));
    }

    #[test]
    fn eigendecompose_pauli_x() {
        // Characteristic polynomial λ² − 1: eigenvalues ∓1 with eigenvectors (1, ∓1)/√2.
        let x = HermitianOperator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]], &tol()).unwrap();
        let atoms = eigendecompose(&x, &tol()).unwrap();
        assert_eq!(atoms.len(), 2);
        assert!((atoms[0].value + 1.0).abs() < 1e-14);
        assert!((atoms[1].value - 1.0).abs() < 1e-14);
        assert!(close(atoms[0].projection.matrix(), &cmat(&[&[0.5, -0.5], &[-0.5, 0.5]]), 1e-12));
        assert!(close(atoms[1].projection.matrix(), &cmat(&[&[0.5, 0.5], &[0.5, 0.5]]), 1e-12));
    }

    #[test]
    fn near_zero_eigenvalues_snap_to_zero() {
        let atoms = eigendecompose(&HermitianOperator::diagonal(&[3e-10, -4e-10, 1.0]), &tol()).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].value, 0.0);
        assert_eq!(atoms[0].projection.rank(), 2);
    }

    #[test]
    fn meet_examples() {
        let e1 = Projection::coordinate(&[true, false]);
        let m = meet_projections(&[e1.clone(), e1.clone()], &tol()).unwrap();
        assert!(close(m.matrix(), e1.matrix(), 1e-12));

        let m = meet_projections(&[e1.clone(), diag_line()], &tol()).unwrap();
        assert_eq!(m.rank(), 0);
        assert!(m.matrix().norm() < 1e-12);

        let q = diag_line();
        let m = meet_projections(&[Projection::identity(2), q.clone()], &tol()).unwrap();
        assert!(close(m.matrix(), q.matrix(), 1e-12));
    }

    #[test]
    fn meet_errors() {
        assert_eq!(meet_projections(&[], &tol()).unwrap_err(), Error::EmptyFamily);
        let err = meet_projections(&[Projection::identity(2), Projection::identity(3)], &tol()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn subprojection_examples() {
        let p = Projection::coordinate(&[true, false, false]);
        let q = Projection::coordinate(&[true, true, false]);
        assert!(is_subprojection(&p, &q, &tol()).unwrap());
        assert!(!is_subprojection(&q, &p, &tol()).unwrap());

        // QP − P for P = e1e1*, Q = line (1,1)/√2 is [[-1/2, 0], [1/2, 0]], norm 1/√2.
        let p = Projection::coordinate(&[true, false]);
        let r = subprojection_residual(&p, &diag_line()).unwrap();
        assert!((r - 0.5_f64.sqrt()).abs() < 1e-14);
        assert!(!is_subprojection(&p, &diag_line(), &tol()).unwrap());

        assert!(is_subprojection(&Projection::zeros(2), &diag_line(), &tol()).unwrap());
        assert!(matches!(
            is_subprojection(&Projection::zeros(2), &Projection::zeros(3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&HermitianOperator::diagonal(&[0.0, 1.0]), &tol()).unwrap());
        assert!(!is_psd(&HermitianOperator::diagonal(&[-1.0, 1.0]), &tol()).unwrap());
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let a = HermitianOperator::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]], &tol()).unwrap();
        assert!(is_psd(&a, &tol()).unwrap());
        let ev = a.eigenvalues().unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn projection_validation() {
        assert!(Projection::new(cmat(&[&[1.0, 0.0], &[0.0, 0.5]]), &tol()).is_err());
        assert!(Projection::new(cmat(&[&[0.0, 1.0], &[0.0, 0.0]]), &tol()).is_err());
        assert_eq!(diag_line().rank(), 1);
        assert_eq!(diag_line().complement().rank(), 1);
    }

    #[test]
    fn subspace_round_trip() {
        let s = Subspace::from_projection(&diag_line());
        assert_eq!(s.rank(), 1);
        assert!(close(s.projection().matrix(), diag_line().matrix(), 1e-12));
        assert!(Subspace::new(cmat(&[&[1.0], &[1.0]]), &tol()).is_err());
        let spanned = Subspace::span(&cmat(&[&[1.0, 2.0], &[0.0, 0.0]]), &tol());
        assert_eq!(spanned.rank(), 1);
    }
}
