//! Graphs, tree decompositions and planar separators.

mod compute;
mod graph;
pub mod planarity;
pub mod separator;
mod td;
mod transform;

pub use compute::{base_case_size, compute_td, compute_td_audited, TdAudit};
pub use graph::{Graph, GraphJson};
pub use planarity::{is_planar, planar_embedding, Embedding};
pub use separator::{lipton_tarjan, planar_separator, Separation, ALPHA, BETA};
pub use td::{norm_p, validate_td, NodeKind, TdDiagnostics, TdNode, TreeDecomposition};
pub use transform::{
    compress, contract_redundant, normalize, preimage, to_nice_form, with_empty_root, CoarseGraining,
};
