//! Hypertoric varieties from integer lattice data: combinatorics, vertex
//! functions, q-difference equations, elliptic stable envelopes and 3d mirror
//! symmetry checks, in exact arithmetic.

pub mod error;
pub mod hypertoric_data;
pub mod lattice;
pub mod arrangement;
pub mod qseries;
pub mod symalg;
pub mod vertex;
pub mod stab;
pub mod mirror;
pub mod qkring;
pub mod instances;

pub use error::{Error, Result};
