//! Grid realization of the Dirac oscillator with a Smorodinsky-Winternitz
//! potential, numerical Higgs-algebra checks, report formats and the `hdl`
//! command-line driver. Exact algebra and the analytic spectrum live in
//! `hdl-core`.

// Negated float comparisons are used so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod converge;
pub mod grid;
pub mod higgs;
pub mod io;
pub mod report;
