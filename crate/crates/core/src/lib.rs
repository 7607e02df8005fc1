//! Coxeter complexes, finite buildings, and constructions of apartments
//! whose intersections realize prescribed convex subcomplexes.

pub mod apartments;
pub mod building;
pub mod coxeter;
mod error;
pub mod instances;
pub mod verify;

pub use error::{Error, Result};
