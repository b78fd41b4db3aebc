//! Graph state simulation with tree decompositions.
//!
//! Modules build from the bottom up: dense GF(2) linear algebra, stabilizer
//! tableaux, graphs with tree decompositions and planar separators, the
//! tree-decomposition sampler itself, planar and grid front ends, and a
//! harness with a statevector oracle, circuit reduction and benchmarks.

pub mod error;
pub mod f2la;
pub mod gss;
pub mod harness;
pub mod planar;
pub mod tableau;
pub mod treedecomp;

pub use error::{Error, Result};
