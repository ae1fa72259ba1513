//! Independent checks of the infimum's defining properties.
//!
//! A candidate `C` is an infimum of `{A_α}` when it is a common lower bound
//! and dominates every other common lower bound. The first clause is checked
//! directly with both logic-order tests. The second is sampled: common lower
//! bounds are exactly the operators `Σ λ Q_λ` whose eigenprojections `Q_λ`
//! sit inside the joint eigenspace meets `⋀_α P^{A_α}({λ})`, so they can be
//! generated constructively.

pub mod sample;

use rand::Rng;
use serde::Serialize;

use crate::error::{ensure_same_dim, Error, Result};
use crate::infimum::InfimumMeasure;
use crate::linalg::{CMatrix, HermitianOperator, Projection, Subspace};
use crate::order::{logic_leq_algebraic_residual, logic_leq_spectral_residual_of};
use crate::spectral::{measure_of, BorelDescriptor, FiniteSpectralMeasure};
use crate::tolerances::Tolerances;

/// Outcome of one named check; `residual` is the worst value observed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub seed: u64,
    pub trials: u32,
    pub checks: Vec<Check>,
}

impl Verdict {
    /// Sorts checks by name and sets `passed` to their conjunction.
    pub fn from_checks(mut checks: Vec<Check>, seed: u64, trials: u32) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Self { passed: checks.iter().all(|c| c.passed), seed, trials, checks }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Parameters of a generated lower bound: which grid values it uses and the
/// rank of its eigenprojection at each.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundSpec {
    pub values: Vec<f64>,
    pub subspace_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub spec: LowerBoundSpec,
    pub operator: HermitianOperator,
}

/// Draws a random common lower bound of the family behind `g`.
///
/// For every grid value with a nonzero joint meet, a rank is drawn uniformly
/// from `0..=rank(meet)` and a Haar-random subspace of the meet of that rank
/// becomes the eigenspace at that value.
pub fn sample_lower_bound<R: Rng + ?Sized>(g: &InfimumMeasure, rng: &mut R) -> Result<LowerBound> {
    let n = g.dim();
    let mut spec = LowerBoundSpec { values: Vec::new(), subspace_dims: Vec::new() };
    let mut m = CMatrix::zeros(n, n);
    for &v in g.grid() {
        let meet = Subspace::from_projection(&g.block_meet(&[v])?);
        if meet.rank() == 0 {
            continue;
        }
        let k = rng.random_range(0..=meet.rank());
        if k == 0 {
            continue;
        }
        let basis = meet.basis() * sample::random_orthonormal(meet.rank(), k, rng);
        m += (&basis * basis.adjoint()).scale(v);
        spec.values.push(v);
        spec.subspace_dims.push(k);
    }
    Ok(LowerBound { spec, operator: HermitianOperator::from_matrix_unchecked(m) })
}

/// A random `D` with `D ⪯ A_α` for every member, or 0 when all joint meets vanish.
pub fn generate_lower_bound(family: &[HermitianOperator], seed: u64, tol: &Tolerances) -> Result<HermitianOperator> {
    let g = InfimumMeasure::from_operators(family, tol)?;
    Ok(sample_lower_bound(&g, &mut sample::rng(seed))?.operator)
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn check(name: &str, residual: f64, limit: f64, detail: String) -> Check {
    Check { name: name.to_string(), passed: residual <= limit, residual, detail }
}

/// Disjoint pair of subsets of `values`, each value going to the first, the
/// second, or neither with equal probability.
fn disjoint_pair<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> (BorelDescriptor, BorelDescriptor) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &v in values {
        match rng.random_range(0..3) {
            0 => first.push(v),
            1 => second.push(v),
            _ => {}
        }
    }
    (BorelDescriptor::finite(first), BorelDescriptor::finite(second))
}

fn measure_checks(m: &FiniteSpectralMeasure, pairs: u32, seed: u64, tol: &Tolerances) -> Vec<Check> {
    let n = m.dim();
    let identity = CMatrix::identity(n, n);
    let mut values: Vec<f64> = m.atoms().iter().map(|a| a.value).chain([0.0]).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let eval = |d: &BorelDescriptor| m.evaluate(d, tol);

    let total = (eval(&BorelDescriptor::reals()).matrix() - &identity)
        .norm()
        .max(eval(&BorelDescriptor::empty()).matrix().norm());

    let mut rng = sample::stream_rng(seed, u64::MAX);
    let (mut additivity, mut orthogonality, mut complement) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..pairs {
        let (mut d1, mut d2) = disjoint_pair(&values, &mut rng);
        // Exercise cofinite sets too: replace Δ₁ by (Δ₁ ∪ Δ₂)ᶜ, still disjoint from Δ₂.
        if rng.random_bool(0.5) {
            d1 = d1.union(&d2).complement();
        }
        if rng.random_bool(0.5) {
            std::mem::swap(&mut d1, &mut d2);
        }
        let (p1, p2, p12) = (eval(&d1), eval(&d2), eval(&d1.union(&d2)));
        additivity = additivity.max((p12.matrix() - p1.matrix() - p2.matrix()).norm());
        orthogonality = orthogonality.max((p1.matrix() * p2.matrix()).norm());
        complement = complement.max((eval(&d1.complement()).matrix() - p1.complement().matrix()).norm());
    }
    let limit = tol.tol_residual;
    vec![
        check(
            "measure.additivity",
            additivity,
            limit,
            format!("‖P(Δ₁∪Δ₂) − P(Δ₁) − P(Δ₂)‖_F over {pairs} disjoint pairs"),
        ),
        check("measure.complement", complement, limit, format!("‖P(Δᶜ) − (I − P(Δ))‖_F over {pairs} sets")),
        check("measure.orthogonality", orthogonality, limit, format!("‖P(Δ₁)P(Δ₂)‖_F over {pairs} disjoint pairs")),
        check("measure.total", total, limit, "P(ℝ) = I and P(∅) = 0".to_string()),
    ]
}

/// Checks that `candidate` is a logic-order infimum of `family`.
///
/// Residuals are normalised as in [`crate::order`], so every order check
/// passes iff its worst residual is at most `tol_residual`.
pub fn verify_infimum(
    family: &[HermitianOperator],
    candidate: &HermitianOperator,
    trials: u32,
    seed: u64,
    tol: &Tolerances,
) -> Result<Verdict> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    ensure_same_dim(family.iter().map(HermitianOperator::dim).chain([candidate.dim()]))?;
    let g = InfimumMeasure::from_operators(family, tol)?;
    let cand_measure = measure_of(candidate, tol)?;
    let limit = tol.tol_residual;

    let mut lower_alg = 0.0_f64;
    let mut lower_spec = 0.0_f64;
    for (a, ma) in family.iter().zip(g.family()) {
        lower_alg = lower_alg.max(logic_leq_algebraic_residual(candidate, a)?);
        lower_spec = lower_spec.max(logic_leq_spectral_residual_of(&cand_measure, ma, tol)?);
    }

    let mut max_alg = Vec::with_capacity(trials as usize);
    let mut max_spec = Vec::with_capacity(trials as usize);
    let mut dominated = 0;
    for t in 0..trials {
        let d = sample_lower_bound(&g, &mut sample::stream_rng(seed, u64::from(t)))?.operator;
        let ra = logic_leq_algebraic_residual(&d, candidate)?;
        let rs = logic_leq_spectral_residual_of(&measure_of(&d, tol)?, &cand_measure, tol)?;
        if ra <= limit && rs <= limit {
            dominated += 1;
        }
        max_alg.push(ra);
        max_spec.push(rs);
    }
    let members = family.len();
    let mut checks = vec![
        check("lower_bound.algebraic", lower_alg, limit, format!("‖C(A − C)‖ test against {members} members")),
        check("lower_bound.spectral", lower_spec, limit, format!("eigenprojection test against {members} members")),
        check(
            "maximality.algebraic",
            worst(max_alg),
            limit,
            format!("{dominated}/{trials} sampled lower bounds dominated"),
        ),
        check(
            "maximality.spectral",
            worst(max_spec),
            limit,
            format!("{dominated}/{trials} sampled lower bounds dominated"),
        ),
    ];
    checks.extend(measure_checks(&cand_measure, trials.max(1), seed, tol));
    Ok(Verdict::from_checks(checks, seed, trials))
}

/// Rank-1 projection whose range lies in no eigenspace of `measure`.
///
/// A measure with a single atom is a multiple of `I`, whose eigenspace holds
/// every vector; any rank-1 projection is returned then.
pub fn undominated_rank_one<R: Rng + ?Sized>(
    measure: &FiniteSpectralMeasure,
    rng: &mut R,
    tol: &Tolerances,
) -> Projection {
    if measure.atoms().len() <= 1 {
        return sample::random_projection(measure.dim(), 1, rng);
    }
    loop {
        let p = sample::random_projection(measure.dim(), 1, rng);
        let inside =
            measure.atoms().iter().any(|a| crate::linalg::is_subprojection(&p, &a.projection, tol).unwrap_or(false));
        if !inside {
            return p;
        }
    }
}
