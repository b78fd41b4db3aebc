//! Graph state simulation driven by a tree decomposition.
//!
//! A nice decomposition is compiled into a CZ/CNOT circuit on data qubits
//! plus merge ancillas. The circuit is simulated lazily up the tree to get a
//! raw sample `y`, and a random stabilizer is then multiplied in so that all
//! ancillas read 0 and postselected qubits read their targets.

mod circuit;
mod correct;
mod sample;

use std::collections::BTreeMap;

use rand::RngCore;
use serde::{Deserialize, Serialize};

pub use circuit::{build_circuit, derive_gprime, Gadget, GadgetCircuit, GadgetStep};
pub use correct::{build_pattern, correct_general, correct_simple, uniformize, Pattern, StabilizerChain};
pub use sample::sample_subroutine;

use crate::error::{Error, Result};
use crate::f2la::BitVector;
use crate::tableau::Basis;
use crate::treedecomp::{normalize, Graph, GraphJson, TreeDecomposition};

/// A graph, a basis per vertex and target outcomes for the postselected set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GssInstance {
    pub graph: Graph,
    pub bases: Vec<Basis>,
    /// `𝒫` with the wanted outcome of each vertex.
    pub postselect: BTreeMap<usize, bool>,
}

/// The postselected outcomes have probability zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroProbability;

impl GssInstance {
    pub fn new(graph: Graph, bases: Vec<Basis>, postselect: BTreeMap<usize, bool>) -> Result<Self> {
        if bases.len() != graph.n() {
            return Err(Error::Dimension(format!("{} bases for {} vertices", bases.len(), graph.n())));
        }
        if let Some(&v) = postselect.keys().find(|&&v| v >= graph.n()) {
            return Err(Error::IndexOutOfRange { index: v, size: graph.n() });
        }
        Ok(Self { graph, bases, postselect })
    }

    pub fn without_postselection(graph: Graph, bases: Vec<Basis>) -> Result<Self> {
        Self::new(graph, bases, BTreeMap::new())
    }

    /// `𝒮`, in increasing order.
    pub fn sampled(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|v| !self.postselect.contains_key(v)).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let graph = Graph::from_json(&j.graph)?;
        let bases = Basis::parse_list(&j.bases)?;
        let mut post = BTreeMap::new();
        for (k, v) in j.postselect {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad vertex key {k:?}")))?;
            if v > 1 {
                return Err(Error::Parse(format!("outcome {v} is not a bit")));
            }
            post.insert(k, v == 1);
        }
        Self::new(graph, bases, post)
    }

    pub fn to_json(&self) -> String {
        let j = InstanceJson {
            graph: self.graph.to_json(),
            bases: self.bases.iter().map(|b| b.letter()).collect(),
            postselect: self.postselect.iter().map(|(&k, &v)| (k.to_string(), u8::from(v))).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    graph: GraphJson,
    bases: String,
    #[serde(default)]
    postselect: BTreeMap<String, u8>,
}

/// `{"outcome": "0110", "flag": null}` or `{"outcome": null, "flag": "zero_probability"}`.
pub fn result_json(r: &std::result::Result<BitVector, ZeroProbability>) -> String {
    let v = match r {
        Ok(x) => serde_json::json!({ "outcome": x.to_string01(), "flag": null }),
        Err(ZeroProbability) => serde_json::json!({ "outcome": null, "flag": "zero_probability" }),
    };
    v.to_string()
}

/// Decomposition used when none is supplied: one bag holding every vertex,
/// in nice form under an empty root.
pub fn trivial_td(n: usize) -> Result<TreeDecomposition> {
    normalize(&TreeDecomposition::single_bag(n))
}

/// Decomposition the sampler will run on. Decompositions that are already
/// nice with an empty root are used as given; anything else goes through
/// `normalize` first, and `None` means [`trivial_td`].
pub fn nice_td(n: usize, td: Option<&TreeDecomposition>) -> Result<TreeDecomposition> {
    match td {
        None => trivial_td(n),
        Some(t) if t.is_nice() && t.bag(t.root()).is_empty() => Ok(t.clone()),
        Some(t) => normalize(t),
    }
}

/// An instance compiled against a fixed decomposition, ready for repeated
/// sampling.
#[derive(Clone, Debug)]
pub struct GssSolver {
    inst: GssInstance,
    circuit: GadgetCircuit,
    gprime: Graph,
}

impl GssSolver {
    /// See [`nice_td`] for how `td` is prepared.
    pub fn new(inst: GssInstance, td: Option<&TreeDecomposition>) -> Result<Self> {
        let td = nice_td(inst.graph.n(), td)?;
        let circuit = build_circuit(&inst.graph, &td)?;
        let gprime = derive_gprime(&circuit);
        Ok(Self { inst, circuit, gprime })
    }

    pub fn instance(&self) -> &GssInstance {
        &self.inst
    }

    pub fn circuit(&self) -> &GadgetCircuit {
        &self.circuit
    }

    pub fn gprime(&self) -> &Graph {
        &self.gprime
    }

    /// One outcome over `𝒮`, or the zero-probability flag.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Result<std::result::Result<BitVector, ZeroProbability>> {
        let inst = &self.inst;
        let n = inst.graph.n();
        if n == 0 {
            return Ok(Ok(BitVector::zeros(0)));
        }
        let y = sample_subroutine(&self.circuit, &inst.bases, rng)?;
        let z = if inst.postselect.is_empty() {
            let p = correct_simple(inst, &self.gprime, &y)?;
            let z = y.xor(&p.x).slice(0, n);
            uniformize(&z, &inst.graph, &inst.bases, rng)
        } else {
            let pattern = build_pattern(inst, &self.circuit, &y)?;
            let Some(p) = correct_general(&self.circuit, &inst.bases, &pattern, rng)? else {
                return Ok(Err(ZeroProbability));
            };
            y.xor(&p.x).slice(0, n)
        };
        Ok(Ok(z.select(&inst.sampled())))
    }
}

/// Samples the instance once. Returns the outcome on `𝒮` in vertex order,
/// or `ZeroProbability` when the postselected event cannot occur.
pub fn solve_instance(
    inst: &GssInstance,
    td: Option<&TreeDecomposition>,
    rng: &mut dyn RngCore,
) -> Result<std::result::Result<BitVector, ZeroProbability>> {
    GssSolver::new(inst.clone(), td)?.sample(rng)
}
