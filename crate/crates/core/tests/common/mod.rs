#![allow(dead_code)]

use logic_infimum::oracle::sample;
use logic_infimum::{CMatrix, HermitianOperator, Projection, Tolerances};
use rand::Rng;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn frob(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// A random projection pair where, half the time, `P ≤ Q` by construction.
pub fn projection_pair<R: Rng>(rng: &mut R) -> (Projection, Projection) {
    let n = rng.random_range(1..=6);
    let q_rank = rng.random_range(0..=n);
    let q = sample::random_projection(n, q_rank, rng);
    let p = if rng.random_bool(0.5) {
        let range = q.range();
        let k = rng.random_range(0..=q_rank);
        let basis = range.basis() * sample::random_orthonormal(q_rank, k, rng);
        Projection::new(&basis * basis.adjoint(), &tol()).unwrap()
    } else {
        sample::random_projection(n, rng.random_range(0..=n), rng)
    };
    (p, q)
}

/// Integer-spectrum family with dimension in `dims` and 2–4 members.
pub fn family<R: Rng>(dims: std::ops::RangeInclusive<usize>, rng: &mut R) -> Vec<HermitianOperator> {
    let n = rng.random_range(dims);
    let members = rng.random_range(2..=4);
    sample::integer_family(n, members, rng)
}

/// Every subset of `values`, as index masks.
pub fn subsets<T: Copy>(values: &[T]) -> Vec<Vec<T>> {
    (0..1u32 << values.len())
        .map(|mask| (0..values.len()).filter(|i| mask >> i & 1 == 1).map(|i| values[i]).collect())
        .collect()
}
