//! Pseudospectral toolkit for the compressible Euler-alignment system with
//! fractional (strongly singular) velocity alignment.
//!
//! * [`spectral`]: periodic grids, Fourier multipliers, Littlewood-Paley blocks.
//! * [`besov`]: homogeneous, hybrid and Chemin-Lerner norms, Bony paraproducts.
//! * [`model`]: parameters, density reformulation, alignment commutator, right-hand sides.
//! * [`linear`]: per-frequency analysis of the linearized system.
//! * [`simulation`]: integrating-factor time stepping and decay diagnostics.
//! * [`io`]: configuration files, trace CSV and binary snapshots.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod besov;
pub mod error;
pub mod io;
pub mod linear;
pub mod model;
pub mod simulation;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
