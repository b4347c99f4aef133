//! Monolithic mixed-dimensional multigrid for single-phase Darcy flow in 2D
//! porous media with networks of axis-aligned fractures.
//!
//! The crate is `no_std` (it only needs `alloc`). File formats, the command
//! line driver and the reference direct solver live in the `mdmg` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod boundary;
pub mod dense;
pub mod error;
pub mod mesh;
pub mod multigrid;
pub mod network;
pub mod sparse;
pub mod transfer;
pub mod vanka;

pub use assembly::{MixedDimSystem, ModelConfig};
pub use error::{Error, Result};
