//! Exact ladder-operator algebras with normal, abnormal and q-deformed
//! exchange relations, Klein/q-parity dressings, and a truncated Fock-space
//! backend that checks the same identities numerically.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod fock;
pub mod klein;
pub mod qscalar;

pub use algebra::{AlgebraError, AlgebraSpec, ModeId, OpExpr, PhaseVector, QMode, Statistics};
pub use qscalar::{Gaussian, UnitScalar};
