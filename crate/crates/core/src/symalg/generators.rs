//! Block elements of the conserved operators, written in their original
//! operator ordering.

use alloc::string::String;

use super::coeff::{gaussian, Rational};
use super::error::SymError;
use super::expr::OperatorExpr;
use super::parse::parse_operator;

/// `V = ½(x1² + x2² + k/x2²)`.
pub const V_SW: &str = "1/2*x1^2 + 1/2*x2^2 + 1/2*k*x2^-2";

pub const D1_Q12: &str = "x1^2*(x2^2 - k*x2^-2)*(2 + 1/2*x1^2 + 1/2*x2^2 + 1/2*k*x2^-2) \
     - 2*(x1*p2 - x2*p1)^2 + 2*p1^2*k*x2^-2 + 2*x1*x2*p1*p2 + 2*p1*p2*x1*x2";
pub const D1_Q22: &str = "x1^2*(x2^2 - k*x2^-2) + 4*pinv2*p1^2*p2^2";
pub const D2_Q12: &str = "x1^2*(x2*p2 + p2*x2) - (x2^2 - k*x2^-2)*(x1*p1 + p1*x1)";
pub const D2_Q22: &str = "2*pinv2*(p2^2*(x1*p1 + p1*x1) - p1^2*(x2*p2 + p2*x2))";
pub const Q3_Q12: &str = "1/2*(x1^2 - x2^2 - k*x2^-2)";
pub const Q3_Q22: &str = "pinv2*(p1^2 - p2^2)";
pub const L_Q11: &str = "x1*p2 - x2*p1";
pub const L_Q22: &str = "pinv2*(x1*p2 - x2*p1)";

/// The four block elements of `[[Q11, Q12 B], [B† Q21, B† Q22 B]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub q11: OperatorExpr,
    pub q12: OperatorExpr,
    pub q21: OperatorExpr,
    pub q22: OperatorExpr,
    /// True when `q11` was supplied rather than derived from `q12`, `q22`.
    pub q11_explicit: bool,
}

/// `Q12 (2 + V) + Q22 p²`.
pub fn derive_q11(
    q12: &OperatorExpr,
    q22: &OperatorExpr,
    v: &OperatorExpr,
) -> Result<OperatorExpr, SymError> {
    let two_plus_v = &OperatorExpr::scalar(gaussian(2, 0)) + v;
    Ok(&q12.mul(&two_plus_v)? + &q22.absorb_p2_right()?)
}

impl Generator {
    /// Generator with `Q21 = Q12` and `Q11` derived from the other blocks.
    pub fn from_blocks(
        name: &str,
        q12: OperatorExpr,
        q22: OperatorExpr,
        v: &OperatorExpr,
    ) -> Result<Self, SymError> {
        let q11 = derive_q11(&q12, &q22, v)?;
        Ok(Self {
            name: String::from(name),
            q11,
            q21: q12.clone(),
            q12,
            q22,
            q11_explicit: false,
        })
    }

    pub fn with_explicit_q11(name: &str, q11: OperatorExpr, q12: OperatorExpr, q22: OperatorExpr) -> Self {
        Self {
            name: String::from(name),
            q11,
            q21: q12.clone(),
            q12,
            q22,
            q11_explicit: true,
        }
    }

    pub fn substitute_k(&self, k: &Rational) -> Self {
        Self {
            name: self.name.clone(),
            q11: self.q11.substitute_k(k),
            q12: self.q12.substitute_k(k),
            q21: self.q21.substitute_k(k),
            q22: self.q22.substitute_k(k),
            q11_explicit: self.q11_explicit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDefs {
    pub d1: Generator,
    pub d2: Generator,
    pub q3: Generator,
    pub l: Generator,
}

impl GeneratorDefs {
    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        [&self.d1, &self.d2, &self.q3, &self.l].into_iter()
    }
}

pub fn potential() -> OperatorExpr {
    parse_operator(V_SW).expect("built-in potential parses")
}

pub fn builtin_generators() -> GeneratorDefs {
    let v = potential();
    let build = |name: &str, q12: &str, q22: &str| {
        let q12 = parse_operator(q12).expect("built-in Q12 parses");
        let q22 = parse_operator(q22).expect("built-in Q22 parses");
        Generator::from_blocks(name, q12, q22, &v).expect("built-in Q22 absorbs p²")
    };
    let l = parse_operator(L_Q11).expect("l parses");
    GeneratorDefs {
        d1: build("D1", D1_Q12, D1_Q22),
        d2: build("D2", D2_Q12, D2_Q22),
        q3: build("Q3", Q3_Q12, Q3_Q22),
        l: Generator::with_explicit_q11(
            "L",
            l,
            OperatorExpr::zero(),
            parse_operator(L_Q22).expect("l/p² parses"),
        ),
    }
}
