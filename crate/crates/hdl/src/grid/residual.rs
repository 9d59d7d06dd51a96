use faer::{c64, Mat};
use serde::Serialize;

use super::dirac::DiracOp;
use super::eigen::EigenSystem;

/// Above this Dirac dimension only the projected residual is computed.
pub const FULL_RESIDUAL_MAX_DIM: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorResidual {
    /// `‖AH − HA‖_F / (‖A‖_F ‖H‖_F)`, when small enough to assemble.
    pub full: Option<f64>,
    /// `‖A_r Λ − Λ A_r‖_F / (‖A_r‖_F ‖Λ‖)` with `A_r = W†AW` over the
    /// supplied eigenvectors.
    pub projected: Option<f64>,
}

/// Frobenius norm.
pub fn fro(a: &Mat<c64>) -> f64 {
    a.norm_l2()
}

/// `W† A W`.
pub fn restrict(a: &DiracOp, w: &Mat<c64>) -> Mat<c64> {
    w.adjoint() * a.apply(w)
}

pub fn projected_residual(a: &DiracOp, low: &EigenSystem) -> f64 {
    let ar = restrict(a, &low.vectors);
    let n = low.len();
    let comm = Mat::from_fn(n, n, |i, j| ar[(i, j)] * (low.values[j] - low.values[i]));
    let scale = fro(&ar) * low.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        0.0
    } else {
        fro(&comm) / scale
    }
}

pub fn commutator_residual(a: &DiracOp, h: &DiracOp, low: Option<&EigenSystem>) -> CommutatorResidual {
    let full = (a.dim() <= FULL_RESIDUAL_MAX_DIM).then(|| {
        let ad = a.dense();
        let hd = h.dense();
        let comm = &ad * &hd - &hd * &ad;
        let scale = fro(&ad) * fro(&hd);
        if scale == 0.0 {
            0.0
        } else {
            fro(&comm) / scale
        }
    });
    CommutatorResidual {
        full,
        projected: low.map(|w| projected_residual(a, w)),
    }
}
