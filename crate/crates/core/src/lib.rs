//! Finite-dimensional laboratory for Lp operator algebras.
//!
//! Everything here works with finite atomic measure spaces and dense
//! complex matrices, so every norm, identity, and K-theory class is
//! either computed exactly or certified by an explicit witness.
//!
//! The crate is `no_std`-compatible (with `alloc`); the companion CLI
//! crate carries all IO and file formats.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod crossed;
pub mod error;
pub mod exact;
pub mod freeaction;
pub mod ktheory;
pub mod leavitt;
pub mod linalg;
pub mod opnorm;
pub mod rng;
pub mod space;
pub mod spatial;
pub mod stabilized;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used by all floating-point paths.
pub type C64 = num_complex::Complex<f64>;

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x4c50_4c41_4232_3031;
