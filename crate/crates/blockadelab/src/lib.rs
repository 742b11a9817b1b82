//! Toolkit for Rydberg blockade structures: weighted blockade graphs, their
//! classical ground-state languages, automorphism groups and orbits, a catalog
//! of logic gadgets, the tessellated fully-symmetric loop structure, and exact
//! diagonalization of the blockade Hamiltonian at desk scale.

pub mod catalog;
pub mod combinatorics;
pub mod error;
pub mod model;
pub mod spectra;
pub mod symmetry;
pub mod tessellation;

pub use error::{Error, Result};
