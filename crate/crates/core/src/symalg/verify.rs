//! Exact check of the four block conditions for `[T, H] = 0`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::error::SymError;
use super::expr::OperatorExpr;
use super::generators::{derive_q11, Generator};

/// Which of the four block conditions a [`ConditionOutcome`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// `Q21 = Q12`
    I,
    /// `[Q11, V] + [Q12, p²] = 0`
    II,
    /// `[Q12, V] + [Q22, p²] = 0`
    III,
    /// `Q11 = Q12 (2 + V) + Q22 p²`
    IV,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::I, Condition::II, Condition::III, Condition::IV];

    pub fn label(self) -> &'static str {
        match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Condition::I => "Q21 - Q12 = 0",
            Condition::II => "[Q11,V] + [Q12,p^2] = 0",
            Condition::III => "[Q12,V] + [Q22,p^2] = 0",
            Condition::IV => "Q11 - Q12*(2+V) - Q22*p^2 = 0",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub condition: Condition,
    pub passed: bool,
    /// Exactly zero when `passed`, otherwise the canonical residual.
    pub residual: OperatorExpr,
}

/// Whether each block equals its own adjoint after normal ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiticityReport {
    pub q12: bool,
    pub q22: bool,
    /// For self-adjoint `Q12`, `Q22` the derived `Q11` has adjoint defect
    /// `[V, Q12] + [p², Q22]`, so this follows from condition (iii).
    pub q11: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub name: String,
    pub outcomes: Vec<ConditionOutcome>,
    pub hermiticity: Option<HermiticityReport>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn outcome(&self, c: Condition) -> &ConditionOutcome {
        &self.outcomes[c as usize]
    }

    pub fn failed(&self) -> Vec<Condition> {
        self.outcomes.iter().filter(|o| !o.passed).map(|o| o.condition).collect()
    }

    /// Short verdict such as `PASS` or `FAIL(ii)`.
    pub fn verdict(&self) -> String {
        let failed = self.failed();
        if failed.is_empty() {
            return "PASS".to_string();
        }
        let labels: Vec<&str> = failed.iter().map(|c| c.label()).collect();
        alloc::format!("FAIL({})", labels.join(","))
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, self.verdict())?;
        for o in &self.outcomes {
            let tag = if o.passed { "pass" } else { "FAIL" };
            writeln!(f, "  ({:<3}) {:<32} {}", o.condition.label(), o.condition.statement(), tag)?;
            if !o.passed {
                writeln!(f, "        residual: {}", o.residual)?;
            }
        }
        if let Some(h) = &self.hermiticity {
            writeln!(
                f,
                "  self-adjoint after ordering: Q12={} Q22={} Q11={}",
                h.q12, h.q22, h.q11
            )?;
        }
        Ok(())
    }
}

fn outcome(condition: Condition, residual: OperatorExpr) -> ConditionOutcome {
    let passed = residual.is_zero();
    ConditionOutcome {
        condition,
        passed,
        residual: if passed { OperatorExpr::zero() } else { residual },
    }
}

fn self_adjoint(e: &OperatorExpr) -> Option<bool> {
    e.adjoint().ok().map(|a| (&a - e).is_zero())
}

/// Evaluates the four conditions exactly, as identities in `k`.
pub fn verify_conditions(g: &Generator, v: &OperatorExpr) -> Result<ConditionReport, SymError> {
    if !v.is_position_only() {
        return Err(SymError::OrderingViolation);
    }
    let p2 = OperatorExpr::p_squared();
    for (s, part) in g.q22.split_by_s() {
        if s > 0 && !part.commutator(&p2)?.is_zero() {
            return Err(SymError::UnverifiableQ22);
        }
    }

    let r1 = &g.q21 - &g.q12;
    let r2 = &g.q11.commutator(v)? + &g.q12.commutator(&p2)?;
    let r3 = &g.q12.commutator(v)? + &g.q22.commutator(&p2)?;
    let r4 = &g.q11 - &derive_q11(&g.q12, &g.q22, v)?;

    let hermiticity = match (self_adjoint(&g.q12), self_adjoint(&g.q22), self_adjoint(&g.q11)) {
        (Some(q12), Some(q22), Some(q11)) => Some(HermiticityReport { q12, q22, q11 }),
        _ => None,
    };

    Ok(ConditionReport {
        name: g.name.clone(),
        outcomes: alloc::vec![
            outcome(Condition::I, r1),
            outcome(Condition::II, r2),
            outcome(Condition::III, r3),
            outcome(Condition::IV, r4),
        ],
        hermiticity,
    })
}
