//! Low-lying grid spectra grouped into degenerate levels.

use hdl_core::spectrum::degeneracy;

use super::dirac::{build_hamiltonian, build_nonrel, DiracOp};
use super::eigen::{cluster_levels, eigh, EigenSpace, EigenSystem};
use super::primitives::{build_primitives, PrimitiveSet};
use super::spec::GridSpec;
use super::GridError;

/// Extra eigenpairs kept above the requested levels, used as the
/// complement when measuring leakage out of an eigenspace.
pub const WINDOW_MARGIN: usize = 8;

/// Number of eigenpairs spanned by levels `N = 0..n_levels`.
pub fn level_count(n_levels: usize) -> usize {
    (0..n_levels as u32).map(|n| degeneracy(n) as usize).sum()
}

/// The diagonalized Hamiltonian on one grid, restricted to its lowest
/// positive-energy eigenpairs.
#[derive(Clone, Debug)]
pub struct GridLevels {
    pub k: f64,
    pub spec: GridSpec,
    pub prim: PrimitiveSet,
    pub h: DiracOp,
    /// Lowest eigenpairs with `E > 1`.
    pub low: EigenSystem,
    /// Clusters of `low`, in ascending energy.
    pub spaces: Vec<EigenSpace>,
}

impl GridLevels {
    /// Cluster `n`, checked against the expected degeneracy.
    pub fn level(&self, n: u32) -> Result<&EigenSpace, GridError> {
        let space = self
            .spaces
            .get(n as usize)
            .ok_or_else(|| GridError::InvalidSpec(format!("level {n} not resolved on this grid")))?;
        let d = degeneracy(n) as usize;
        if space.multiplicity != d {
            return Err(GridError::Degeneracy {
                n,
                found: space.multiplicity,
                expected: d,
            });
        }
        Ok(space)
    }

    /// The first `count` eigenvalues of `low`.
    pub fn values(&self, count: usize) -> &[f64] {
        &self.low.values[..count.min(self.low.len())]
    }
}

/// The `count` lowest eigenvalues of the Dirac Hamiltonian above `E = 1`.
pub fn dirac_low_values(k: f64, spec: &GridSpec, count: usize) -> Result<Vec<f64>, GridError> {
    let prim = build_primitives(spec)?;
    let full = eigh(&build_hamiltonian(k, &prim).dense())?;
    Ok(full.window_above(1.0, count).values)
}

/// The `count` lowest eigenvalues of `p²/2 + V`.
pub fn nonrel_low_values(k: f64, spec: &GridSpec, count: usize) -> Result<Vec<f64>, GridError> {
    let prim = build_primitives(spec)?;
    let full = eigh(&build_nonrel(k, &prim).dense(prim.dims()))?;
    Ok(full.values.into_iter().take(count).collect())
}

/// Builds and diagonalizes the Dirac Hamiltonian, keeping enough positive
/// energy eigenpairs for `n_levels` levels.
pub fn solve_dirac_levels(k: f64, spec: &GridSpec, n_levels: usize, cluster_tol: f64) -> Result<GridLevels, GridError> {
    let prim = build_primitives(spec)?;
    let h = build_hamiltonian(k, &prim);
    let full = eigh(&h.dense())?;
    // Electron-like states sit above the rest energy 1.
    let low = full.window_above(1.0, level_count(n_levels) + WINDOW_MARGIN);
    let spaces = cluster_levels(&low.values, cluster_tol, n_levels)?;
    Ok(GridLevels {
        k,
        spec: *spec,
        prim,
        h,
        low,
        spaces,
    })
}

/// Lowest eigenvalues of `p²/2 + V` and their clusters.
pub fn solve_nonrel_levels(
    k: f64,
    spec: &GridSpec,
    n_levels: usize,
    cluster_tol: f64,
) -> Result<(Vec<f64>, Vec<EigenSpace>), GridError> {
    let values = nonrel_low_values(k, spec, level_count(n_levels) + WINDOW_MARGIN)?;
    let spaces = cluster_levels(&values, cluster_tol, n_levels)?;
    Ok((values, spaces))
}
