//! Infima of finite families of Hermitian operators under the logic order.
//!
//! For Hermitian `A`, `B` the logic order `A ⪯ B` holds when `C = B − A`
//! satisfies `AC = 0`; equivalently every spectral projection of `A` on a
//! Borel set avoiding 0 is dominated by the corresponding projection of `B`.
//! The infimum of a family is built as a projection-valued measure `G` from
//! meets of the members' spectral projections, and the operator is
//! `C = Σ λ G({λ})`.
//!
//! Modules, bottom up:
//! - [`linalg`]: Hermitian matrices, projections, meets, eigendecomposition.
//! - [`spectral`]: finite spectral measures and finite/cofinite Borel sets.
//! - [`order`]: numeric order and two independent logic-order tests.
//! - [`infimum`]: partition enumeration, the measure `G`, infimum assembly.
//! - [`oracle`]: random common lower bounds and the infimum verifier.
//! - [`cli`]: the `loginf` command-line front-end and its file formats.

pub mod cli;
pub mod error;
pub mod infimum;
pub mod linalg;
pub mod oracle;
pub mod order;
pub mod spectral;
pub mod tolerances;

pub use error::{Error, Result};
pub use infimum::{
    assemble_infimum, construct_g, enumerate_partitions, InfimumMeasure, InfimumResult, Mode, Partition,
};
pub use linalg::{
    eigendecompose, is_psd, is_subprojection, meet_projections, CMatrix, EigenAtom, HermitianOperator, Projection,
    Subspace,
};
pub use oracle::{generate_lower_bound, verify_infimum, Check, Verdict};
pub use order::{is_logic_leq, is_logic_leq_algebraic, is_logic_leq_spectral, is_numeric_leq};
pub use spectral::{joint_value_grid, measure_of, BorelDescriptor, FiniteSpectralMeasure};
pub use tolerances::Tolerances;
