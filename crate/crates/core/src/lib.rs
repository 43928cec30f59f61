//! Exact computer algebra for the rank-2 Higgs moduli space: residue-based
//! intersection numbers on the stable-bundle moduli, the equivariant moduli
//! and its divisor at infinity, the perverse/weight pairing matrices and
//! their kernel problems, discrete-heat polynomials, and the determinantal
//! positivity scans.
//!
//! Everything is exact rational arithmetic; there is no floating point
//! anywhere in this crate.

pub mod checks;
pub mod error;
pub mod exactalg;
pub mod heatpoly;
pub mod intersect;
pub mod pwmatrix;

pub use error::{Error, Result};
