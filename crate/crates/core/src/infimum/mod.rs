//! The projection-valued measure `G` of a family and the infimum `∫ λ dG`.
//!
//! For a set `Δ` avoiding 0,
//!
//! ```text
//! G(Δ) = ⋀_{γ ∈ Γ(Δ)} Σ_{Δ' ∈ γ} ⋀_α P^{A_α}(Δ')
//! ```
//!
//! where `Γ(Δ)` ranges over the partitions of `Δ`; sets containing 0 are
//! handled through `G(Δ) = I − G(ℝ \ Δ)`. With finite spectra only the atoms
//! of the joint value grid inside `Δ` matter, so `Γ(Δ)` is the set of
//! partitions of those atoms.
//!
//! Refining a partition never increases the inner sum, so the all-singletons
//! partition attains the outer meet. [`Mode::Singleton`] evaluates that one
//! partition; [`Mode::Exhaustive`] scans all of them.

mod partition;

use std::collections::hash_map::{Entry, HashMap};
use std::fmt;
use std::str::FromStr;

pub use partition::{bell_number, enumerate_partitions, Partition, Partitions, RestrictedGrowthStrings};

use crate::error::{ensure_same_dim, Error, Result};
use crate::linalg::{meet_projections, CMatrix, EigenAtom, HermitianOperator, MeetAccumulator, Projection};
use crate::spectral::{family_radius, joint_value_grid, measure_of, BorelDescriptor, FiniteSpectralMeasure};
use crate::tolerances::Tolerances;

pub const DEFAULT_PARTITION_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Resolves to [`Mode::Singleton`].
    #[default]
    Auto,
    Singleton,
    Exhaustive,
}

impl Mode {
    pub fn resolve(self) -> Self {
        match self {
            Mode::Auto => Mode::Singleton,
            m => m,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Singleton => "singleton",
            Mode::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Mode::Auto),
            "singleton" => Ok(Mode::Singleton),
            "exhaustive" => Ok(Mode::Exhaustive),
            other => Err(format!("unknown mode `{other}` (expected auto, singleton or exhaustive)")),
        }
    }
}

/// Which branch of the definition produced a value of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `G(∅) = 0`.
    Empty,
    /// `0 ∉ Δ`: meets over partitions.
    ZeroFree,
    /// `0 ∈ Δ`: `I − G(ℝ \ Δ)`.
    Complement,
}

/// The measure `G` of a fixed family, with its joint value grid.
#[derive(Debug, Clone)]
pub struct InfimumMeasure {
    family: Vec<FiniteSpectralMeasure>,
    grid: Vec<f64>,
    dim: usize,
    radius: f64,
    zero_radius: f64,
    tol: Tolerances,
    partition_cap: usize,
}

impl InfimumMeasure {
    pub fn new(family: Vec<FiniteSpectralMeasure>, tol: &Tolerances) -> Result<Self> {
        let grid = joint_value_grid(&family, tol)?;
        let dim = family[0].dim();
        let scale = family.iter().fold(0.0_f64, |acc, m| acc.max(m.scale()));
        Ok(Self {
            radius: family_radius(&family, tol),
            zero_radius: tol.zero_radius(scale),
            family,
            grid,
            dim,
            tol: *tol,
            partition_cap: DEFAULT_PARTITION_CAP,
        })
    }

    pub fn from_operators(family: &[HermitianOperator], tol: &Tolerances) -> Result<Self> {
        ensure_same_dim(family.iter().map(HermitianOperator::dim))?.ok_or(Error::EmptyFamily)?;
        let measures = family.iter().map(|a| measure_of(a, tol)).collect::<Result<Vec<_>>>()?;
        Self::new(measures, tol)
    }

    pub fn with_partition_cap(mut self, cap: usize) -> Self {
        self.partition_cap = cap;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn family(&self) -> &[FiniteSpectralMeasure] {
        &self.family
    }

    pub fn partition_cap(&self) -> usize {
        self.partition_cap
    }

    pub fn branch(&self, delta: &BorelDescriptor) -> Branch {
        if delta.is_empty() {
            Branch::Empty
        } else if delta.contains_zero(self.zero_radius) {
            Branch::Complement
        } else {
            Branch::ZeroFree
        }
    }

    /// Grid atoms lying in `delta`.
    pub fn atoms_in(&self, delta: &BorelDescriptor) -> Vec<f64> {
        self.grid.iter().copied().filter(|&v| delta.contains(v, self.radius)).collect()
    }

    /// `⋀_α P^{A_α}(block)` for a set of grid values.
    pub fn block_meet(&self, block: &[f64]) -> Result<Projection> {
        let delta = BorelDescriptor::finite(block.iter().copied());
        let parts: Vec<Projection> = self.family.iter().map(|m| m.evaluate_with_radius(&delta, self.radius)).collect();
        meet_projections(&parts, &self.tol)
    }

    /// `Σ_{block ∈ γ} ⋀_α P^{A_α}(block)` for one partition γ.
    pub fn partition_sum(&self, partition: &Partition<f64>) -> Result<CMatrix> {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for block in &partition.blocks {
            sum += self.block_meet(block)?.matrix();
        }
        Ok(sum)
    }

    pub fn evaluate(&self, delta: &BorelDescriptor, mode: Mode) -> Result<Projection> {
        match self.branch(delta) {
            Branch::Empty => Ok(Projection::zeros(self.dim)),
            Branch::Complement => Ok(self.evaluate_zero_free(&delta.complement(), mode)?.complement()),
            Branch::ZeroFree => self.evaluate_zero_free(delta, mode),
        }
    }

    fn evaluate_zero_free(&self, delta: &BorelDescriptor, mode: Mode) -> Result<Projection> {
        let atoms = self.atoms_in(delta);
        match mode.resolve() {
            Mode::Exhaustive => self.exhaustive(&atoms),
            _ => self.singleton(&atoms),
        }
    }

    fn singleton(&self, atoms: &[f64]) -> Result<Projection> {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for &v in atoms {
            sum += self.block_meet(&[v])?.matrix();
        }
        Ok(Projection::from_matrix_unchecked(sum))
    }

    fn exhaustive(&self, atoms: &[f64]) -> Result<Projection> {
        // Blocks are keyed by u64 bitmask, so 63 atoms is a hard ceiling.
        partition::check_cap(atoms.len(), self.partition_cap.min(63))?;
        if atoms.len() <= 1 {
            return self.singleton(atoms);
        }
        // Block meets are shared across partitions; key them by atom bitmask.
        let mut meets: HashMap<u64, Projection> = HashMap::new();
        let mut acc = MeetAccumulator::new(self.dim);
        let mut codes = RestrictedGrowthStrings::new(atoms.len());
        let mut masks: Vec<u64> = Vec::with_capacity(atoms.len());
        while let Some(code) = codes.advance() {
            masks.clear();
            for (i, &b) in code.iter().enumerate() {
                if b == masks.len() {
                    masks.push(0);
                }
                masks[b] |= 1 << i;
            }
            let mut sum = CMatrix::zeros(self.dim, self.dim);
            for &mask in &masks {
                if let Entry::Vacant(slot) = meets.entry(mask) {
                    let block: Vec<f64> = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i]).collect();
                    slot.insert(self.block_meet(&block)?);
                }
                sum += meets[&mask].matrix();
            }
            acc.push_matrix(&sum)?;
        }
        acc.finish(&self.tol)
    }

    /// Assembles `C = Σ λ G({λ})` together with the atoms of `G`.
    ///
    /// The 0-atom is `I − G(grid)`. In exhaustive mode `G(grid)` comes from
    /// the full partition scan, so the completeness check on the resulting
    /// measure also cross-checks the scan against the singleton values.
    pub fn assemble(&self, mode: Mode) -> Result<InfimumResult> {
        let mode = mode.resolve();
        let mut atoms = Vec::new();
        let mut nonzero_total = CMatrix::zeros(self.dim, self.dim);
        for &v in &self.grid {
            let p = self.evaluate(&BorelDescriptor::finite([v]), mode)?;
            if p.is_zero() {
                continue;
            }
            nonzero_total += p.matrix();
            atoms.push(EigenAtom { value: v, projection: p });
        }
        let covered = match mode {
            Mode::Exhaustive => self.evaluate(&BorelDescriptor::finite(self.grid.iter().copied()), mode)?,
            _ => Projection::from_matrix_unchecked(nonzero_total),
        };
        let zero = covered.complement();
        if !zero.is_zero() {
            let at = atoms.partition_point(|a| a.value < 0.0);
            atoms.insert(at, EigenAtom { value: 0.0, projection: zero });
        }
        let measure = FiniteSpectralMeasure::new(self.dim, atoms, &self.tol)?;
        Ok(InfimumResult { operator: measure.operator(), measure, mode_used: mode, grid: self.grid.clone() })
    }
}

/// The infimum `C` and its spectral measure `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfimumResult {
    pub operator: HermitianOperator,
    pub measure: FiniteSpectralMeasure,
    pub mode_used: Mode,
    pub grid: Vec<f64>,
}

/// `G(Δ)` for a family of spectral measures, with the default partition cap.
pub fn construct_g(
    family: &[FiniteSpectralMeasure],
    delta: &BorelDescriptor,
    mode: Mode,
    tol: &Tolerances,
) -> Result<Projection> {
    InfimumMeasure::new(family.to_vec(), tol)?.evaluate(delta, mode)
}

/// The logic-order infimum of `family`, with the default partition cap.
pub fn assemble_infimum(family: &[HermitianOperator], mode: Mode, tol: &Tolerances) -> Result<InfimumResult> {
    InfimumMeasure::from_operators(family, tol)?.assemble(mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn family() -> Vec<FiniteSpectralMeasure> {
        [[1.0, 2.0, 0.0], [1.0, 3.0, 0.0]]
            .iter()
            .map(|d| measure_of(&HermitianOperator::diagonal(d), &tol()).unwrap())
            .collect()
    }

    fn assert_coordinate(p: &Projection, mask: &[bool]) {
        let diff = (p.matrix() - Projection::coordinate(mask).matrix()).norm();
        assert!(diff < 1e-12, "projection differs by {diff}");
    }

    #[test]
    fn single_member_reproduces_its_measure() {
        let a = HermitianOperator::from_real_rows(
            &[vec![1.0, 2.0, 0.0], vec![2.0, -1.0, 0.5], vec![0.0, 0.5, 3.0]],
            &tol(),
        )
        .unwrap();
        let m = measure_of(&a, &tol()).unwrap();
        let s = m.support_nonzero();
        for delta in [BorelDescriptor::finite([s[0]]), BorelDescriptor::finite([s[1], s[2]])] {
            for mode in [Mode::Singleton, Mode::Exhaustive] {
                let g = construct_g(std::slice::from_ref(&m), &delta, mode, &tol()).unwrap();
                assert!((g.matrix() - m.evaluate(&delta, &tol()).matrix()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_family_examples() {
        let fam = family();
        for mode in [Mode::Singleton, Mode::Exhaustive] {
            let g1 = construct_g(&fam, &BorelDescriptor::finite([1.0]), mode, &tol()).unwrap();
            assert_coordinate(&g1, &[true, false, false]);
            let g23 = construct_g(&fam, &BorelDescriptor::finite([2.0, 3.0]), mode, &tol()).unwrap();
            assert_coordinate(&g23, &[false, false, false]);
            let gc = construct_g(&fam, &BorelDescriptor::cofinite([1.0, 2.0, 3.0]), mode, &tol()).unwrap();
            assert_coordinate(&gc, &[false, true, true]);
        }
        assert_coordinate(&construct_g(&fam, &BorelDescriptor::empty(), Mode::Auto, &tol()).unwrap(), &[false; 3]);
        assert_coordinate(&construct_g(&fam, &BorelDescriptor::reals(), Mode::Auto, &tol()).unwrap(), &[true; 3]);
    }

    #[test]
    fn branches() {
        let g = InfimumMeasure::new(family(), &tol()).unwrap();
        assert_eq!(g.branch(&BorelDescriptor::empty()), Branch::Empty);
        assert_eq!(g.branch(&BorelDescriptor::finite([1.0])), Branch::ZeroFree);
        assert_eq!(g.branch(&BorelDescriptor::finite([0.0, 1.0])), Branch::Complement);
        assert_eq!(g.branch(&BorelDescriptor::cofinite([0.0])), Branch::ZeroFree);
        assert_eq!(g.branch(&BorelDescriptor::reals()), Branch::Complement);
        assert_eq!(g.grid(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn assemble_diagonal_family() {
        let ops = [HermitianOperator::diagonal(&[1.0, 2.0, 0.0]), HermitianOperator::diagonal(&[1.0, 3.0, 0.0])];
        for mode in [Mode::Auto, Mode::Exhaustive] {
            let r = assemble_infimum(&ops, mode, &tol()).unwrap();
            assert!((r.operator.matrix() - HermitianOperator::diagonal(&[1.0, 0.0, 0.0]).matrix()).norm() < 1e-12);
            let atoms = r.measure.atoms();
            assert_eq!(atoms.len(), 2);
            assert_eq!(atoms[0].value, 0.0);
            assert_coordinate(&atoms[0].projection, &[false, true, true]);
            assert_eq!(atoms[1].value, 1.0);
            assert_coordinate(&atoms[1].projection, &[true, false, false]);
        }
        assert_eq!(assemble_infimum(&ops, Mode::Auto, &tol()).unwrap().mode_used, Mode::Singleton);
    }

    #[test]
    fn cap_and_family_errors() {
        let many: Vec<f64> = (1..=4).map(f64::from).collect();
        let op = HermitianOperator::diagonal(&many);
        let g = InfimumMeasure::from_operators(&[op.clone(), op], &tol()).unwrap().with_partition_cap(3);
        // G(ℝ) = I − G(∅) never reaches the partition scan.
        assert!(g.evaluate(&BorelDescriptor::reals(), Mode::Exhaustive).is_ok());
        let err = g.evaluate(&BorelDescriptor::cofinite([0.0]), Mode::Exhaustive).unwrap_err();
        assert_eq!(err, Error::CapExceeded { atoms: 4, cap: 3, required: 15 });
        assert!(g.evaluate(&BorelDescriptor::cofinite([0.0]), Mode::Singleton).is_ok());
        assert!(matches!(g.assemble(Mode::Exhaustive), Err(Error::CapExceeded { .. })));

        assert_eq!(assemble_infimum(&[], Mode::Auto, &tol()).unwrap_err(), Error::EmptyFamily);
        let err = assemble_infimum(&[HermitianOperator::zeros(2), HermitianOperator::zeros(3)], Mode::Auto, &tol());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mode_parsing() {
        for m in [Mode::Auto, Mode::Singleton, Mode::Exhaustive] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("fast".parse::<Mode>().is_err());
    }
}
