//! Finite-grid realization of the scalar and Dirac operators.
//!
//! Momenta are Fourier derivatives on periodic node sets. Along `x2` the
//! half-line nodes are stretched towards the axis, where the `k/x2²`
//! barrier forces the wavefunctions to vanish.

pub mod axis;
pub mod dirac;
pub mod eigen;
pub mod levels;
pub mod primitives;
pub mod realize;
pub mod residual;
pub mod scalar;
pub mod spec;

pub use dirac::{build_hamiltonian, build_l, build_nonrel, build_t, DiracOp};
pub use eigen::{cluster_levels, eigh, EigenSpace, EigenSystem, DEFAULT_CLUSTER_TOL};
pub use levels::{dirac_low_values, level_count, nonrel_low_values, solve_dirac_levels, solve_nonrel_levels, GridLevels};
pub use primitives::{build_primitives, PrimitiveSet, PINV_CUTOFF};
pub use realize::{realize, realize_naive};
pub use residual::{commutator_residual, projected_residual, CommutatorResidual};
pub use scalar::{Dims, ScalarOp};
pub use spec::{GridSpec, X2Domain};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidSpec(String),
    #[error("Dirac dimension {dim} exceeds the cap {cap}; reduce M1/M2 or raise the cap (dense storage needs about 16*dim^2 bytes per matrix)")]
    TooLarge { dim: usize, cap: usize },
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("no spectral gap at tolerance {tol} near E = {at}")]
    NoGap { at: f64, tol: f64 },
    #[error("level N={n} has multiplicity {found} on the grid, expected {expected}")]
    Degeneracy { n: u32, found: usize, expected: usize },
}
