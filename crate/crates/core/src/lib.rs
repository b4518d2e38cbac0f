//! Exact-arithmetic library for counting dihedral fields of degree 2p over Q
//! by computing admissible conductors, p-defects, p-ring spaces, and
//! p-multiplicities over quadratic base fields.

pub mod arith;
pub mod cache;
pub mod census;
pub mod error;
pub mod multiplicity;
pub mod quadforms;
pub mod realquad;
pub mod residues;
pub mod ringspace;

pub use error::{Error, Result};
