use std::sync::Arc;

use faer::{c64, Mat};

use super::axis::Axis;
use super::scalar::{Dims, PinvData, ScalarOp};
use super::spec::{GridSpec, X2Domain};
use super::GridError;

/// Relative eigenvalue cutoff for the `p⁻²` pseudoinverse.
pub const PINV_CUTOFF: f64 = 1e-10;

/// Position and momentum building blocks on a [`GridSpec`].
#[derive(Clone, Debug)]
pub struct PrimitiveSet {
    pub spec: GridSpec,
    pub ax1: Axis,
    pub ax2: Axis,
    pub pinv: Arc<PinvData>,
    /// Number of `P²` modes dropped by the pseudoinverse.
    pub pinv_dropped: usize,
}

pub fn build_primitives(spec: &GridSpec) -> Result<PrimitiveSet, GridError> {
    spec.validate()?;
    let ax1 = Axis::uniform(spec.x1_nodes(), spec.h1())?;
    let ax2 = match spec.x2_domain {
        X2Domain::HalfLine => Axis::stretched(spec.m2, spec.l2, spec.stretch)?,
        X2Domain::FullLine => Axis::uniform(spec.x2_nodes(), 2.0 * spec.l2 / (spec.m2 + 1) as f64)?,
    };
    let lam: Vec<f64> = ax1
        .p_evals
        .iter()
        .flat_map(|a| ax2.p_evals.iter().map(move |b| a * a + b * b))
        .collect();
    let max = lam.iter().cloned().fold(0.0, f64::max);
    let mut dropped = 0;
    let weights = lam
        .iter()
        .map(|&l| {
            if l > PINV_CUTOFF * max {
                1.0 / l
            } else {
                dropped += 1;
                0.0
            }
        })
        .collect();
    let pinv = Arc::new(PinvData {
        u1: ax1.p_evecs.clone(),
        u2: ax2.p_evecs.clone(),
        weights,
    });
    Ok(PrimitiveSet {
        spec: *spec,
        ax1,
        ax2,
        pinv,
        pinv_dropped: dropped,
    })
}

fn identity(n: usize) -> Mat<c64> {
    Mat::identity(n, n)
}

impl PrimitiveSet {
    pub fn dims(&self) -> Dims {
        Dims {
            m1: self.spec.m1,
            m2: self.spec.m2,
        }
    }

    pub fn m1(&self) -> usize {
        self.spec.m1
    }

    pub fn m2(&self) -> usize {
        self.spec.m2
    }

    /// `x1ᵃ p1ᵇ ⊗ x2ᶜ p2ᵈ`.
    pub fn monomial(&self, a: u32, c: i32, b: u32, d: u32) -> ScalarOp {
        ScalarOp::kron(self.ax1.monomial(a as i32, b), self.ax2.monomial(c, d))
    }

    pub fn x1(&self) -> ScalarOp {
        self.monomial(1, 0, 0, 0)
    }

    pub fn x2(&self) -> ScalarOp {
        self.monomial(0, 1, 0, 0)
    }

    pub fn x2_inv2(&self) -> ScalarOp {
        self.monomial(0, -2, 0, 0)
    }

    pub fn p1(&self) -> ScalarOp {
        self.monomial(0, 0, 1, 0)
    }

    pub fn p2(&self) -> ScalarOp {
        self.monomial(0, 0, 0, 1)
    }

    /// `P1² ⊗ 1 + 1 ⊗ P2²`.
    pub fn psq(&self) -> ScalarOp {
        let p1 = &self.ax1.p;
        let p2 = &self.ax2.p;
        ScalarOp::Kron(vec![
            super::scalar::KronTerm {
                a: p1 * p1,
                b: identity(self.m2()),
            },
            super::scalar::KronTerm {
                a: identity(self.m1()),
                b: p2 * p2,
            },
        ])
    }

    pub fn pinv2(&self) -> ScalarOp {
        ScalarOp::Pinv2(self.pinv.clone())
    }

    /// `B = P1 − i P2`.
    pub fn b(&self) -> ScalarOp {
        self.b_with_sign(-1.0)
    }

    /// `B† = P1 + i P2`.
    pub fn bdag(&self) -> ScalarOp {
        self.b_with_sign(1.0)
    }

    fn b_with_sign(&self, sign: f64) -> ScalarOp {
        let i2 = Mat::from_fn(self.m2(), self.m2(), |r, c| self.ax2.p[(r, c)] * c64::new(0.0, sign));
        ScalarOp::Kron(vec![
            super::scalar::KronTerm {
                a: self.ax1.p.clone(),
                b: identity(self.m2()),
            },
            super::scalar::KronTerm {
                a: identity(self.m1()),
                b: i2,
            },
        ])
    }
}
