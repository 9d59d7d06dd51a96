//! Dense Hermitian diagonalization and degeneracy clustering.

use faer::{c64, Mat, Side};
use serde::Serialize;

use super::GridError;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-3;

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Mat<c64>,
}

/// A run of eigenvalues treated as one degenerate level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenSpace {
    /// Mean of the member eigenvalues.
    pub energy: f64,
    pub multiplicity: usize,
    /// Index of the first member in the system it was cut from.
    pub start: usize,
    /// Largest minus smallest member.
    pub spread: f64,
}

/// Diagonalizes `(A + A†)/2`.
pub fn eigh(a: &Mat<c64>) -> Result<EigenSystem, GridError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(GridError::Eigen(format!("matrix is {}x{}, not square", n, a.ncols())));
    }
    let sym = Mat::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let eig = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| GridError::Eigen(format!("{e:?}")))?;
    Ok(EigenSystem {
        values: eig.S().column_vector().iter().map(|z| z.re).collect(),
        vectors: eig.U().to_owned(),
    })
}

impl EigenSystem {
    /// The `count` lowest eigenpairs with eigenvalue above `floor`.
    pub fn window_above(&self, floor: f64, count: usize) -> EigenSystem {
        let start = self.values.iter().position(|&v| v > floor).unwrap_or(self.values.len());
        let end = (start + count).min(self.values.len());
        EigenSystem {
            values: self.values[start..end].to_vec(),
            vectors: self.vectors.subcols(start, end - start).to_owned(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Eigenvectors belonging to `space`.
    pub fn space_vectors(&self, space: &EigenSpace) -> Mat<c64> {
        self.vectors.subcols(space.start, space.multiplicity).to_owned()
    }

    /// Eigenvectors of the first `count` entries not in `space`.
    pub fn complement_vectors(&self, space: &EigenSpace, count: usize) -> Mat<c64> {
        let idx: Vec<usize> = (0..self.len().min(count))
            .filter(|&i| i < space.start || i >= space.start + space.multiplicity)
            .collect();
        Mat::from_fn(self.vectors.nrows(), idx.len(), |r, c| self.vectors[(r, idx[c])])
    }
}

/// Groups ascending eigenvalues into levels: a new level starts at every
/// gap of at least `tol`; a level whose total spread reaches `tol` has no
/// usable gap and is an error. At most `max_levels` levels are returned
/// (scanning stops once they are complete).
pub fn cluster_levels(values: &[f64], tol: f64, max_levels: usize) -> Result<Vec<EigenSpace>, GridError> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < values.len() && out.len() < max_levels {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < tol {
            end += 1;
        }
        let spread = values[end - 1] - values[start];
        if spread >= tol {
            return Err(GridError::NoGap {
                at: values[start],
                tol,
            });
        }
        let members = &values[start..end];
        out.push(EigenSpace {
            energy: members.iter().sum::<f64>() / members.len() as f64,
            multiplicity: members.len(),
            start,
            spread,
        });
        start = end;
    }
    Ok(out)
}
