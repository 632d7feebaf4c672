//! Spectral-theory primitives for 1-D discrete Schrödinger operators
//! with sparse barrier potentials.
//!
//! The operators are tridiagonal matrices with unit off-diagonals and a
//! real potential on the diagonal, acting on square-summable sequences
//! over the half-line or the whole line. This crate provides:
//!
//! - sparse potentials and their growth/gap conditions ([`potential`]),
//! - overflow-safe transfer-matrix cocycles and Lyapunov estimates
//!   ([`cocycle`]),
//! - solution families, truncated norms with fractional cut-off, the
//!   length scale `L(ε)` and subordinacy diagnostics ([`solution`]),
//! - Borel transforms `m_θ(z)` for all boundary conditions, the
//!   whole-line transform `M(z)`, and boundary-value inequality checks
//!   ([`herglotz`]),
//! - independent ground truth through finite tridiagonal truncations
//!   ([`oracle`]),
//! - local Hausdorff/packing dimension estimators ([`fractal`]),
//! - the three certified sparse-potential constructions
//!   ([`constructor`]).
//!
//! Everything is `no_std + alloc`: the crate is pure computation, all
//! IO and file formats live in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod dd;

pub mod cocycle;
pub mod constructor;
pub mod error;
pub mod fractal;
pub mod herglotz;
pub mod oracle;
pub mod potential;
pub mod solution;

pub use error::{Error, Result};
