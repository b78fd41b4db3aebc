//! Reference oracles, statistics, circuit reduction and benchmarks.

pub mod bench;
pub mod circuit;
pub mod statevec;
pub mod stats;
