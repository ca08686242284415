//! Faddeev-Skyrme energies, Hopf charges and coset gauge calculus for maps
//! from a periodic cubic lattice into homogeneous spaces, with CP¹ = SU₂/U₁
//! as the fully supported case.

pub mod algebra;
pub mod checks;
pub mod energy;
pub mod error;
pub mod fields;
pub mod gauge;
pub mod io;
pub mod lattice;
pub mod minimize;
pub mod samples;
pub mod topology;

pub use error::{Error, Result};
