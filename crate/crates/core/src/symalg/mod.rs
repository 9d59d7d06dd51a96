//! Exact operator algebra over `(x1, p1)`, `(x2, p2)` with Laurent powers of
//! `x2`, a left factor `p⁻²`, and coefficients polynomial in `k`.

pub mod coeff;
pub mod error;
pub mod expr;
pub mod generators;
pub mod parse;
pub mod verify;

pub use coeff::{Coeff, Gaussian, Rational};
pub use error::SymError;
pub use expr::{Exponents, OperatorExpr, WeylMonomial};
pub use generators::{builtin_generators, potential, Generator, GeneratorDefs};
pub use parse::parse_operator;
pub use verify::{verify_conditions, Condition, ConditionOutcome, ConditionReport, HermiticityReport};
