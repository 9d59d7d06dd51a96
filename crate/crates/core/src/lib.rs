//! Core algebra for the spin-symmetric 2D Dirac Hamiltonian with a
//! Smorodinsky-Winternitz potential.
//!
//! [`symalg`] manipulates operator expressions exactly and checks the block
//! conditions for conserved quantities. [`spectrum`] evaluates the closed-form
//! level equation, degeneracies and Higgs-algebra structure constants.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// Negated float comparisons are used so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod spectrum;
pub mod symalg;
