//! Scalar-sector operators kept in factored form.
//!
//! Vectors on the `M1 × M2` grid use index `i·M2 + j`. A column reshaped
//! column-major as `M2 × M1` is `Z = Xᵀ`, so `(A ⊗ B)` acts as
//! `Z ↦ B Z Aᵀ` and never needs the full Kronecker product.

use std::sync::Arc;

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, MatMut, MatRef, Par};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub m1: usize,
    pub m2: usize,
}

impl Dims {
    pub fn scalar(&self) -> usize {
        self.m1 * self.m2
    }
}

/// Spectral data for `(P1² ⊗ 1 + 1 ⊗ P2²)⁺`: eigenvectors of `P1`, `P2`
/// and the inverted (or zeroed) eigenvalues in grid index order.
#[derive(Clone, Debug)]
pub struct PinvData {
    pub u1: Mat<c64>,
    pub u2: Mat<c64>,
    pub weights: Vec<f64>,
}

/// `A ⊗ B` with `A` acting on `x1`, `B` on `x2`.
#[derive(Clone, Debug)]
pub struct KronTerm {
    pub a: Mat<c64>,
    pub b: Mat<c64>,
}

#[derive(Clone, Debug)]
pub enum ScalarOp {
    Zero,
    Identity,
    Kron(Vec<KronTerm>),
    Pinv2(Arc<PinvData>),
    /// `F₀ F₁ ⋯ F_n`, applied right to left.
    Product(Vec<ScalarOp>),
    Sum(Vec<ScalarOp>),
    Scaled(c64, Box<ScalarOp>),
    Adjoint(Box<ScalarOp>),
}

fn zeros(rows: usize, cols: usize) -> Mat<c64> {
    Mat::zeros(rows, cols)
}

fn view(col: &[c64], dims: Dims) -> MatRef<'_, c64> {
    MatRef::from_column_major_slice(col, dims.m2, dims.m1)
}

fn view_mut(col: &mut [c64], dims: Dims) -> MatMut<'_, c64> {
    MatMut::from_column_major_slice_mut(col, dims.m2, dims.m1)
}

/// `out += B Z Aᵀ` (or `B† Z conj(A)` when `adjoint`) column by column.
fn kron_apply(a: &Mat<c64>, b: &Mat<c64>, x: &Mat<c64>, out: &mut Mat<c64>, dims: Dims, adjoint: bool) {
    let mut tmp = zeros(dims.m2, dims.m1);
    for c in 0..x.ncols() {
        let z = view(x.col_as_slice(c), dims);
        if adjoint {
            matmul(tmp.as_mut(), Accum::Replace, b.adjoint(), z, c64::new(1.0, 0.0), Par::Seq);
            let dst = view_mut(out.col_as_slice_mut(c), dims);
            matmul(dst, Accum::Add, tmp.as_ref(), a.conjugate(), c64::new(1.0, 0.0), Par::Seq);
        } else {
            matmul(tmp.as_mut(), Accum::Replace, b.as_ref(), z, c64::new(1.0, 0.0), Par::Seq);
            let dst = view_mut(out.col_as_slice_mut(c), dims);
            matmul(dst, Accum::Add, tmp.as_ref(), a.transpose(), c64::new(1.0, 0.0), Par::Seq);
        }
    }
}

fn pinv_apply(p: &PinvData, x: &Mat<c64>, dims: Dims) -> Mat<c64> {
    let mut out = zeros(x.nrows(), x.ncols());
    let mut tmp = zeros(dims.m2, dims.m1);
    let mut spec = zeros(dims.m2, dims.m1);
    for c in 0..x.ncols() {
        let z = view(x.col_as_slice(c), dims);
        // (U1 ⊗ U2)†: Z ↦ U2† Z conj(U1)
        matmul(tmp.as_mut(), Accum::Replace, p.u2.adjoint(), z, c64::new(1.0, 0.0), Par::Seq);
        matmul(spec.as_mut(), Accum::Replace, tmp.as_ref(), p.u1.conjugate(), c64::new(1.0, 0.0), Par::Seq);
        for i in 0..dims.m1 {
            for j in 0..dims.m2 {
                spec[(j, i)] *= p.weights[i * dims.m2 + j];
            }
        }
        // (U1 ⊗ U2): Z ↦ U2 Z U1ᵀ
        matmul(tmp.as_mut(), Accum::Replace, p.u2.as_ref(), spec.as_ref(), c64::new(1.0, 0.0), Par::Seq);
        let dst = view_mut(out.col_as_slice_mut(c), dims);
        matmul(dst, Accum::Replace, tmp.as_ref(), p.u1.transpose(), c64::new(1.0, 0.0), Par::Seq);
    }
    out
}

impl ScalarOp {
    pub fn kron(a: Mat<c64>, b: Mat<c64>) -> Self {
        ScalarOp::Kron(vec![KronTerm { a, b }])
    }

    pub fn scaled(self, s: c64) -> Self {
        ScalarOp::Scaled(s, Box::new(self))
    }

    pub fn adjoint(self) -> Self {
        ScalarOp::Adjoint(Box::new(self))
    }

    /// `½(A + A†)`.
    pub fn hermitian_part(self) -> Self {
        ScalarOp::Sum(vec![self.clone(), self.adjoint()]).scaled(c64::new(0.5, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ScalarOp::Zero => true,
            ScalarOp::Kron(t) => t.is_empty(),
            ScalarOp::Sum(t) => t.iter().all(ScalarOp::is_zero),
            ScalarOp::Product(f) => f.iter().any(ScalarOp::is_zero),
            ScalarOp::Scaled(s, inner) => *s == c64::new(0.0, 0.0) || inner.is_zero(),
            ScalarOp::Adjoint(inner) => inner.is_zero(),
            ScalarOp::Identity | ScalarOp::Pinv2(_) => false,
        }
    }

    /// `self · x` for a block of column vectors.
    pub fn apply(&self, x: &Mat<c64>, dims: Dims) -> Mat<c64> {
        self.apply_inner(x, dims, false)
    }

    /// `self† · x`.
    pub fn apply_adjoint(&self, x: &Mat<c64>, dims: Dims) -> Mat<c64> {
        self.apply_inner(x, dims, true)
    }

    fn apply_inner(&self, x: &Mat<c64>, dims: Dims, adjoint: bool) -> Mat<c64> {
        match self {
            ScalarOp::Zero => zeros(x.nrows(), x.ncols()),
            ScalarOp::Identity => x.clone(),
            ScalarOp::Kron(terms) => {
                let mut out = zeros(x.nrows(), x.ncols());
                for t in terms {
                    kron_apply(&t.a, &t.b, x, &mut out, dims, adjoint);
                }
                out
            }
            ScalarOp::Pinv2(p) => pinv_apply(p, x, dims),
            ScalarOp::Product(factors) => {
                let mut acc = x.clone();
                if adjoint {
                    for f in factors {
                        acc = f.apply_inner(&acc, dims, true);
                    }
                } else {
                    for f in factors.iter().rev() {
                        acc = f.apply_inner(&acc, dims, false);
                    }
                }
                acc
            }
            ScalarOp::Sum(terms) => {
                let mut out = zeros(x.nrows(), x.ncols());
                for t in terms {
                    out += t.apply_inner(x, dims, adjoint);
                }
                out
            }
            ScalarOp::Scaled(s, inner) => {
                let s = if adjoint { s.conj() } else { *s };
                let mut out = inner.apply_inner(x, dims, adjoint);
                for c in 0..out.ncols() {
                    for v in out.col_as_slice_mut(c) {
                        *v *= s;
                    }
                }
                out
            }
            ScalarOp::Adjoint(inner) => inner.apply_inner(x, dims, !adjoint),
        }
    }

    /// Dense `S × S` matrix.
    pub fn dense(&self, dims: Dims) -> Mat<c64> {
        let n = dims.scalar();
        match self {
            ScalarOp::Zero => zeros(n, n),
            ScalarOp::Kron(terms) => {
                let mut out = zeros(n, n);
                for t in terms {
                    out += t.a.kron(&t.b);
                }
                out
            }
            _ => self.apply(&Mat::identity(n, n), dims),
        }
    }
}
