//! Desk-scale laboratory for the elliptic Ginibre ensemble.
//!
//! The crate provides the pure computational pieces: dense complex linear
//! algebra, seeded samplers for GUE/elliptic matrices, overflow-safe
//! evaluation of the normalised characteristic polynomial and its exact
//! finite-n second moment, modified Chebyshev trace statistics, the
//! limiting Gaussian analytic function, and exact brute-force oracles for
//! the moment combinatorics. Everything here is `no_std` (with `alloc`);
//! file formats and the command-line driver live in the companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod charpoly;
pub mod chebmod;
pub mod clinalg;
pub mod error;
pub mod gaflimit;
pub mod hermite;
pub mod momentcomb;
pub mod sampling;
pub mod spectrum;
pub mod tracestats;
pub mod wickoracle;

pub use error::{Error, Result};
pub use num_complex::Complex64;
