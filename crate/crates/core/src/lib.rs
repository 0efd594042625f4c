//! Symbolic calculus for 4-manifolds assembled from blocks by fiber sums,
//! Luttinger surgeries and mapping tori, computed on fundamental group
//! presentations together with Euler characteristic and signature.

pub mod abelian;
pub mod catalog;
pub mod coset;
pub mod error;
pub mod fp;
pub mod manifold;
pub mod verify;

pub use error::{Error, Result};
