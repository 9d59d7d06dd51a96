//! Numerical realization of symbolic operator expressions.

use faer::{c64, Mat};
use hdl_core::symalg::OperatorExpr;

use super::primitives::PrimitiveSet;
use super::scalar::{KronTerm, ScalarOp};

fn kron_part(e: &OperatorExpr, prim: &PrimitiveSet, k: f64) -> ScalarOp {
    let mut terms = Vec::new();
    for (ex, coeff) in e.iter() {
        let (re, im) = coeff.eval(k);
        if re == 0.0 && im == 0.0 {
            continue;
        }
        let w = c64::new(re, im);
        let a = prim.ax1.monomial(ex.a as i32, ex.b);
        let a = Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * w);
        terms.push(KronTerm {
            a,
            b: prim.ax2.monomial(ex.c, ex.d),
        });
    }
    if terms.is_empty() {
        ScalarOp::Zero
    } else {
        ScalarOp::Kron(terms)
    }
}

/// Substitutes grid matrices into each normal-ordered monomial, with
/// `p⁻²ˢ` realized as the `s`-th power of the pseudoinverse on the left.
pub fn realize_naive(e: &OperatorExpr, prim: &PrimitiveSet, k: f64) -> ScalarOp {
    let mut parts = Vec::new();
    for (s, rest) in e.split_by_s() {
        let body = kron_part(&rest, prim, k);
        if body.is_zero() {
            continue;
        }
        if s == 0 {
            parts.push(body);
        } else {
            let mut factors: Vec<ScalarOp> = (0..s).map(|_| prim.pinv2()).collect();
            factors.push(body);
            parts.push(ScalarOp::Product(factors));
        }
    }
    match parts.len() {
        0 => ScalarOp::Zero,
        1 => parts.pop().unwrap_or(ScalarOp::Zero),
        _ => ScalarOp::Sum(parts),
    }
}

/// `½(N(e) + N(e†)†)` where `N` is [`realize_naive`].
///
/// Normal ordering and grid substitution do not commute, so a self-adjoint
/// symbol can realize to a matrix with a small anti-Hermitian part; the
/// average removes it and leaves the formal order of accuracy unchanged.
pub fn realize(e: &OperatorExpr, prim: &PrimitiveSet, k: f64) -> ScalarOp {
    let naive = realize_naive(e, prim, k);
    if naive.is_zero() {
        return ScalarOp::Zero;
    }
    match e.adjoint() {
        Ok(dag) if dag == *e => naive.hermitian_part(),
        Ok(dag) => ScalarOp::Sum(vec![naive, realize_naive(&dag, prim, k).adjoint()]).scaled(c64::new(0.5, 0.0)),
        Err(_) => naive,
    }
}
