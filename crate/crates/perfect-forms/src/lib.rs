//! Perfect Hermitian forms over imaginary quadratic fields.
//!
//! Given a fundamental discriminant `D < 0` and a rank `N`, this crate
//! enumerates the perfect Hermitian forms of rank `N` over the ring of
//! integers `O_D` up to `GL_N(O_D)`-equivalence, builds the associated
//! Voronoi cell complex modulo the group action, and computes its integral
//! homology (ranks and elementary divisors) together with three internal
//! consistency checks: the chain identity `d∘d = 0`, a mass formula on
//! stabilizer orders, and an explicit top-degree cycle.
//!
//! All arithmetic is exact: rationals, elements of `Q(√D)`, and integer
//! matrices are handled with arbitrary precision throughout. Floating point
//! is never consulted for a correctness-relevant decision.
//!
//! The crate is `no_std` (with `alloc`); IO, checkpointing and the CLI live
//! in the companion `perfect-forms-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cell_complex;
pub mod error;
pub mod field;
pub mod hermitian;
pub mod homology;
pub mod isometry;
pub mod linalg;
pub mod polyhedra;
pub mod verification;
pub mod voronoi;

#[cfg(feature = "oracle")]
pub mod oracle;

pub use error::Error;
pub use field::{Disc, Int, QuadElem, QuadInt, Rat};
