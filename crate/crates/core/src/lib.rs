//! Search and verification tools for simplicial line arrangements and
//! rank-3 simple matroids.

pub mod exec;
pub mod field;
pub mod gfplane;
pub mod intpoly;
pub mod lattice;
pub mod numberfield;
pub mod data;
pub mod matroid;
pub mod moduli;
pub mod greedy;
pub mod driver;
