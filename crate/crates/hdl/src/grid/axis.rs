//! One-dimensional position and momentum matrices.

use std::f64::consts::PI;

use faer::{c64, Mat, Side};

use super::GridError;

/// Nodes, momentum matrix and its eigendecomposition along one direction.
#[derive(Clone, Debug)]
pub struct Axis {
    pub nodes: Vec<f64>,
    /// Hermitian `−i d/dx`.
    pub p: Mat<c64>,
    pub p_evals: Vec<f64>,
    pub p_evecs: Mat<c64>,
}

/// Fourier derivative `−i d/du` on a ring of `m` points with spacing `h`.
///
/// Mode wavenumbers are `θ_j/h` with `θ_j ∈ (−π, π]`; the Nyquist mode is
/// given `+π` so the matrix is Hermitian with no spurious zero modes beyond
/// the constant.
pub fn fourier_derivative(m: usize, h: f64) -> Mat<c64> {
    let thetas: Vec<f64> = (0..m)
        .map(|j| {
            if 2 * j == m {
                PI
            } else {
                let jj = if 2 * j < m { j as f64 } else { j as f64 - m as f64 };
                2.0 * PI * jj / m as f64
            }
        })
        .collect();
    let circulant: Vec<c64> = (0..m)
        .map(|r| {
            let mut acc = c64::new(0.0, 0.0);
            for &t in &thetas {
                let phase = t * r as f64;
                acc += c64::new(phase.cos(), phase.sin()) * (t / h);
            }
            acc / m as f64
        })
        .collect();
    Mat::from_fn(m, m, |a, b| circulant[(a + m - b) % m])
}

impl Axis {
    fn from_parts(nodes: Vec<f64>, p: Mat<c64>) -> Result<Self, GridError> {
        let eig = p
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| GridError::Eigen(format!("{e:?}")))?;
        let p_evals = eig.S().column_vector().iter().map(|z| z.re).collect();
        let p_evecs = eig.U().to_owned();
        Ok(Self {
            nodes,
            p,
            p_evals,
            p_evecs,
        })
    }

    /// Uniform periodic grid; `nodes` must be equally spaced by `h`.
    pub fn uniform(nodes: Vec<f64>, h: f64) -> Result<Self, GridError> {
        let p = fourier_derivative(nodes.len(), h);
        Self::from_parts(nodes, p)
    }

    /// Half-line grid `x = L tᵖ`, `t_j = j/(m+1)`, with the symmetrized
    /// mapped derivative `φ′^{-1/2} D φ′^{-1/2}`.
    pub fn stretched(m: usize, l: f64, stretch: f64) -> Result<Self, GridError> {
        let n = (m + 1) as f64;
        let t: Vec<f64> = (1..=m).map(|j| j as f64 / n).collect();
        let nodes = t.iter().map(|&tj| l * tj.powf(stretch)).collect();
        let s: Vec<f64> = t
            .iter()
            .map(|&tj| (l * stretch * tj.powf(stretch - 1.0)).powf(-0.5))
            .collect();
        let d = fourier_derivative(m, 1.0 / n);
        let p = Mat::from_fn(m, m, |a, b| d[(a, b)] * (s[a] * s[b]));
        Self::from_parts(nodes, p)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `diag(xᶜ)` as a dense matrix.
    pub fn x_pow(&self, c: i32) -> Mat<c64> {
        let m = self.len();
        Mat::from_fn(m, m, |a, b| {
            if a == b {
                c64::new(self.nodes[a].powi(c), 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })
    }

    /// `xᶜ pᵇ` as a dense matrix.
    pub fn monomial(&self, c: i32, b: u32) -> Mat<c64> {
        let m = self.len();
        let mut acc = Mat::<c64>::identity(m, m);
        for _ in 0..b {
            acc = &acc * &self.p;
        }
        let x = &self.nodes;
        Mat::from_fn(m, m, |a, j| acc[(a, j)] * x[a].powi(c))
    }
}
