//! Seeded random matrices: Haar unitaries, random subspaces, projections and
//! operator families with small integer spectra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{orthonormalize_columns, real, CMatrix, HermitianOperator, Projection};
use num_complex::Complex64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// `rows × cols` matrix with orthonormal columns, Haar distributed
/// (Gram–Schmidt of a complex Gaussian matrix).
pub fn random_orthonormal<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(cols <= rows, "cannot fit {cols} orthonormal columns in dimension {rows}");
    loop {
        let q = orthonormalize_columns(&gaussian_matrix(rows, cols, rng), 1e-6);
        if q.ncols() == cols {
            return q;
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    random_orthonormal(n, n, rng)
}

/// Hermitian matrix with standard complex Gaussian off-diagonal entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOperator {
    let g = gaussian_matrix(n, n, rng);
    HermitianOperator::from_matrix_unchecked(&g + g.adjoint())
}

pub fn random_projection<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Projection {
    Projection::from_orthonormal_columns(n, &random_orthonormal(n, rank, rng))
}

/// `U diag(values) U*`.
pub fn rotated_spectrum(values: &[f64], unitary: &CMatrix) -> HermitianOperator {
    let n = values.len();
    let d = CMatrix::from_fn(n, n, |r, c| if r == c { real(values[r]) } else { real(0.0) });
    HermitianOperator::from_matrix_unchecked(unitary * d * unitary.adjoint())
}

/// Values drawn uniformly from `{−2, −1, 0, 1, 2}`.
pub fn integer_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.random_range(-2..=2))).collect()
}

/// A family of `members` operators of dimension `dim`, each an integer
/// spectrum from `{−2, …, 2}` rotated by a unitary.
///
/// Independent Haar rotations alone almost never share eigenvectors, which
/// makes most meets trivial. So each family picks one of three couplings:
/// independent rotations, one shared rotation (a commuting family), or a
/// shared rotation followed by per-member rotations confined to a random
/// coordinate block.
pub fn integer_family<R: Rng + ?Sized>(dim: usize, members: usize, rng: &mut R) -> Vec<HermitianOperator> {
    let shared = random_unitary(dim, rng);
    let coupling = rng.random_range(0..3);
    let block = rng.random_range(1..=dim);
    (0..members)
        .map(|_| {
            let spectrum = integer_spectrum(dim, rng);
            let u = match coupling {
                0 => random_unitary(dim, rng),
                1 => shared.clone(),
                _ => {
                    let local = random_unitary(block, rng);
                    let mut embed = CMatrix::identity(dim, dim);
                    embed.view_mut((0, 0), (block, block)).copy_from(&local);
                    &shared * embed
                }
            };
            rotated_spectrum(&spectrum, &u)
        })
        .collect()
}
