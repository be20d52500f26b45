//! Distance concentration of complex Gaussian random lattices in high dimension.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: complex matrices, Householder QR with a positive real
//!   diagonal, a counter-based seeded RNG, and the chi-squared c.d.f. and
//!   Gaussian Q-function.
//! * [`lattice`]: the random generator model, the rectangular Gaussian-integer
//!   codebook, noise, distances and the normalized distance ratio.
//! * [`bounds`]: Chernoff tail bounds, sphere-decoding complexity lower bounds,
//!   the `eta` counting construction, and the sphere-packing minimal-distance
//!   bound with the inflation predicate.
//! * [`decoder`]: a fixed-radius sphere decoder that counts every partial
//!   vector satisfying the recursive sphere constraint, plus an exhaustive
//!   oracle with identical count semantics.
//! * [`experiments`]: seeded, parallelism-invariant Monte Carlo harnesses.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod decoder;
mod error;
pub mod experiments;
pub mod lattice;
pub mod numerics;

pub use error::{Error, Result};
