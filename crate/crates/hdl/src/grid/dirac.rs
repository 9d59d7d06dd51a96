//! Two-component operators `[[UL, UR], [LL, LR]]`; the upper sector occupies
//! Dirac indices `0..S`, the lower `S..2S`.

use faer::{c64, Mat};
use hdl_core::symalg::{potential, Generator, OperatorExpr};

use super::primitives::PrimitiveSet;
use super::realize::{realize, realize_naive};
use super::scalar::{Dims, ScalarOp};

#[derive(Clone, Debug)]
pub struct DiracOp {
    pub ul: ScalarOp,
    pub ur: ScalarOp,
    pub ll: ScalarOp,
    pub lr: ScalarOp,
    pub dims: Dims,
}

impl DiracOp {
    pub fn dim(&self) -> usize {
        2 * self.dims.scalar()
    }

    /// `self · x` for `x` with `2S` rows.
    pub fn apply(&self, x: &Mat<c64>) -> Mat<c64> {
        let s = self.dims.scalar();
        let top = x.subrows(0, s).to_owned();
        let bot = x.subrows(s, s).to_owned();
        let mut out = Mat::zeros(2 * s, x.ncols());
        let up = self.ul.apply(&top, self.dims) + self.ur.apply(&bot, self.dims);
        let down = self.ll.apply(&top, self.dims) + self.lr.apply(&bot, self.dims);
        out.subrows_mut(0, s).copy_from(&up);
        out.subrows_mut(s, s).copy_from(&down);
        out
    }

    pub fn dense(&self) -> Mat<c64> {
        let s = self.dims.scalar();
        let mut out = Mat::zeros(2 * s, 2 * s);
        for (blk, r, c) in [(&self.ul, 0, 0), (&self.ur, 0, s), (&self.ll, s, 0), (&self.lr, s, s)] {
            if !blk.is_zero() {
                out.submatrix_mut(r, c, s, s).copy_from(&blk.dense(self.dims));
            }
        }
        out
    }
}

/// `[[1 + V, B], [B†, −1]]` with `V = ½(x1² + x2² + k/x2²)`.
pub fn build_hamiltonian(k: f64, prim: &PrimitiveSet) -> DiracOp {
    build_hamiltonian_with(&potential(), k, prim)
}

/// Same block layout for an arbitrary position-only potential.
pub fn build_hamiltonian_with(v: &OperatorExpr, k: f64, prim: &PrimitiveSet) -> DiracOp {
    let dims = prim.dims();
    let v = realize_naive(v, prim, k);
    DiracOp {
        ul: ScalarOp::Sum(vec![ScalarOp::Identity, v]),
        ur: prim.b(),
        ll: prim.bdag(),
        lr: ScalarOp::Identity.scaled(c64::new(-1.0, 0.0)),
        dims,
    }
}

/// `p²/2 + V` in the scalar sector.
pub fn build_nonrel(k: f64, prim: &PrimitiveSet) -> ScalarOp {
    ScalarOp::Sum(vec![
        prim.psq().scaled(c64::new(0.5, 0.0)),
        realize_naive(&potential(), prim, k),
    ])
}

/// `[[T11, T12 B], [B† T21, B† T22 B]]` with each `Tij` the realized block
/// element.
pub fn build_t(g: &Generator, k: f64, prim: &PrimitiveSet) -> DiracOp {
    let dims = prim.dims();
    let t12 = realize(&g.q12, prim, k);
    let t21 = realize(&g.q21, prim, k);
    let t22 = realize(&g.q22, prim, k);
    let sandwich = |inner: ScalarOp| {
        if inner.is_zero() {
            ScalarOp::Zero
        } else {
            ScalarOp::Product(vec![prim.bdag(), inner, prim.b()])
        }
    };
    let right = |inner: ScalarOp| {
        if inner.is_zero() {
            ScalarOp::Zero
        } else {
            ScalarOp::Product(vec![inner, prim.b()])
        }
    };
    let left = |inner: ScalarOp| {
        if inner.is_zero() {
            ScalarOp::Zero
        } else {
            ScalarOp::Product(vec![prim.bdag(), inner])
        }
    };
    DiracOp {
        ul: realize(&g.q11, prim, k),
        ur: right(t12),
        ll: left(t21),
        lr: sandwich(t22),
        dims,
    }
}

/// `[[l, 0], [0, B† (p⁻² l) B]]`.
pub fn build_l(prim: &PrimitiveSet) -> DiracOp {
    let l = OperatorExpr::angular_momentum();
    let g = Generator::with_explicit_q11("L", l.clone(), OperatorExpr::zero(), l.with_pinv_power(1));
    build_t(&g, 0.0, prim)
}
