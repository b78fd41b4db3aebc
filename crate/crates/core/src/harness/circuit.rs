//! Clifford circuits on a planar qubit layout, reduced to graph state
//! sampling.
//!
//! The circuit `C` is padded to `C' = H H U_C H H` on every qubit. Each
//! Hadamard other than the outermost two layers is replaced by a gadget
//! that teleports the wire onto a fresh ancilla: the old wire is measured
//! in X and the new one carries `X^m H` of the old state. What remains is
//! `H^{⊗} D H^{⊗}` with `D` a product of `S` and `CZ` gates, which is a
//! graph state measured in X or Y, up to known outcome flips. Grouping the
//! ancillas of each qubit gives a coarse-graining onto the layout.
//!
//! Qubit labels of the reduced instance: wire `q` starts as qubit `q`;
//! ancillas follow from `n` in gadget order.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::statevec::DenseState;
use crate::error::{Error, Result};
use crate::f2la::BitVector;
use crate::gss::{GssInstance, GssSolver};
use crate::planar::coarse_solver;
use crate::tableau::{apply_gate, Basis, Gate, Tableau};
use crate::treedecomp::{CoarseGraining, Graph, GraphJson};

/// A circuit over `{H, S, CZ}` whose CZ gates act on layout edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    layout: Graph,
    gates: Vec<Gate>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    layout_edges: Vec<[usize; 2]>,
    gates: Vec<GateJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GateJson {
    g: String,
    q: Vec<usize>,
}

/// A single-qubit Clifford up to global phase, keyed by the images of `X`
/// and `Z` written as signed letters.
fn clifford_key(word: &[bool]) -> String {
    let mut t = Tableau::identity(1);
    for &h in word {
        apply_gate(&mut t, if h { Gate::H(0) } else { Gate::S(0) }).expect("one-qubit gate");
    }
    format!("{:?}{:?}", t.destabilizer(0), t.stabilizer(0))
}

/// The 24 single-qubit Cliffords modulo phase, each as a shortest word in
/// `H` (`true`) and `S` (`false`), in breadth-first order from the identity.
pub fn single_qubit_cliffords() -> &'static [Vec<bool>] {
    static TABLE: OnceLock<Vec<Vec<bool>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([Vec::new()]);
        while let Some(word) = queue.pop_front() {
            if seen.insert(clifford_key(&word), out.len()).is_some() {
                continue;
            }
            for g in [true, false] {
                let mut next = word.clone();
                next.push(g);
                queue.push_back(next);
            }
            out.push(word);
        }
        out
    })
}

/// Shortest `{H, S}` word for the Clifford given by `word`.
fn canonical_word(word: &[bool]) -> &'static [bool] {
    static INDEX: OnceLock<HashMap<String, usize>> = OnceLock::new();
    let index = INDEX.get_or_init(|| {
        single_qubit_cliffords().iter().enumerate().map(|(i, w)| (clifford_key(w), i)).collect()
    });
    &single_qubit_cliffords()[index[&clifford_key(word)]]
}

/// `{H, S}` word (`true` = H) of a named single-qubit gate.
fn named_word(name: &str) -> Option<Vec<bool>> {
    const H: bool = true;
    const S: bool = false;
    let word = match name.to_ascii_uppercase().as_str() {
        "I" | "ID" => vec![],
        "H" => vec![H],
        "S" => vec![S],
        "SDG" => vec![S, S, S],
        "Z" => vec![S, S],
        "X" => vec![H, S, S, H],
        "Y" => vec![S, S, H, S, S, H],
        "SX" => vec![H, S, H],
        "SXDG" => vec![H, S, S, S, H],
        other => {
            let k: usize = other.strip_prefix('C')?.parse().ok()?;
            single_qubit_cliffords().get(k)?.clone()
        }
    };
    Some(word)
}

impl CliffordCircuit {
    /// `gates` may only contain `H`, `S` and `CZ`, the latter on layout edges.
    pub fn new(layout: Graph, gates: Vec<Gate>) -> Result<Self> {
        let n = layout.n();
        for g in &gates {
            for q in g.qubits() {
                if q >= n {
                    return Err(Error::IndexOutOfRange { index: q, size: n });
                }
            }
            match *g {
                Gate::H(_) | Gate::S(_) => {}
                Gate::Cz(a, b) if layout.has_edge(a, b) => {}
                Gate::Cz(a, b) => return Err(Error::Invalid(format!("CZ on {a},{b} is not a layout edge"))),
                other => return Err(Error::Invalid(format!("{other:?} is not in {{H, S, CZ}}"))),
            }
        }
        Ok(Self { n, layout, gates })
    }

    /// Compiles arbitrary gates: any named single-qubit Clifford (`I`, `X`,
    /// `Y`, `Z`, `H`, `S`, `Sdg`, `SX`, `SXdg`, `C0`..`C23`) through the
    /// table of shortest words, plus `CZ`, `CX`/`CNOT` and `SWAP`.
    pub fn from_named(layout: Graph, named: &[(String, Vec<usize>)]) -> Result<Self> {
        let mut gates = Vec::new();
        let mut pending: Vec<Vec<bool>> = vec![Vec::new(); layout.n()];
        let flush = |q: usize, pending: &mut Vec<Vec<bool>>, gates: &mut Vec<Gate>| {
            for &h in canonical_word(&pending[q]) {
                gates.push(if h { Gate::H(q) } else { Gate::S(q) });
            }
            pending[q].clear();
        };
        let check = |q: usize| if q < layout.n() { Ok(q) } else { Err(Error::IndexOutOfRange { index: q, size: layout.n() }) };
        for (name, qs) in named {
            let upper = name.to_ascii_uppercase();
            match (upper.as_str(), qs.as_slice()) {
                ("CZ" | "CX" | "CNOT" | "SWAP", &[a, b]) => {
                    let (a, b) = (check(a)?, check(b)?);
                    flush(a, &mut pending, &mut gates);
                    flush(b, &mut pending, &mut gates);
                    let cx = |c: usize, t: usize, gates: &mut Vec<Gate>| gates.extend([Gate::H(t), Gate::Cz(c, t), Gate::H(t)]);
                    match upper.as_str() {
                        "CZ" => gates.push(Gate::Cz(a, b)),
                        "SWAP" => {
                            cx(a, b, &mut gates);
                            cx(b, a, &mut gates);
                            cx(a, b, &mut gates);
                        }
                        _ => cx(a, b, &mut gates),
                    }
                }
                (_, &[q]) => {
                    let word = named_word(name).ok_or_else(|| Error::Parse(format!("unknown gate {name:?}")))?;
                    pending[check(q)?].extend(word);
                }
                _ => return Err(Error::Parse(format!("gate {name:?} on {} qubits", qs.len()))),
            }
        }
        for q in 0..layout.n() {
            flush(q, &mut pending, &mut gates);
        }
        Self::new(layout, gates)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: CircuitJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let layout = Graph::from_json(&GraphJson { n: j.n, edges: j.layout_edges })?;
        let named: Vec<(String, Vec<usize>)> = j.gates.into_iter().map(|g| (g.g, g.q)).collect();
        Self::from_named(layout, &named)
    }

    pub fn to_json(&self) -> String {
        let gates = self
            .gates
            .iter()
            .map(|g| match *g {
                Gate::H(q) => GateJson { g: "H".into(), q: vec![q] },
                Gate::S(q) => GateJson { g: "S".into(), q: vec![q] },
                Gate::Cz(a, b) => GateJson { g: "CZ".into(), q: vec![a, b] },
                _ => unreachable!("validated on construction"),
            })
            .collect();
        let j = CircuitJson { n: self.n, layout_edges: self.layout.to_json().edges, gates };
        serde_json::to_string(&j).expect("circuit serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &Graph {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of layers when each gate starts as early as its qubits allow.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n];
        for g in &self.gates {
            let qs = g.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            qs.iter().for_each(|&q| level[q] = l);
        }
        level.into_iter().max().unwrap_or(0)
    }

    /// Tableau of `U_C`.
    pub fn tableau(&self) -> Tableau {
        let mut t = Tableau::identity(self.n);
        for &g in &self.gates {
            apply_gate(&mut t, g).expect("validated gate");
        }
        t
    }

    /// Circuit of at most `depth` layers; each layer applies CZ on a random
    /// matching of layout edges and `H`, `S` or nothing elsewhere.
    pub fn random<R: Rng + ?Sized>(layout: Graph, depth: usize, rng: &mut R) -> Self {
        let n = layout.n();
        let edges = layout.edges();
        let mut gates = Vec::new();
        for _ in 0..depth {
            let mut busy = vec![false; n];
            let mut order: Vec<usize> = (0..edges.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            for e in order {
                let (a, b) = edges[e];
                if !busy[a] && !busy[b] && rng.gen_bool(0.5) {
                    busy[a] = true;
                    busy[b] = true;
                    gates.push(Gate::Cz(a, b));
                }
            }
            for q in (0..n).filter(|&q| !busy[q]) {
                match rng.gen_range(0..3) {
                    0 => gates.push(Gate::H(q)),
                    1 => gates.push(Gate::S(q)),
                    _ => {}
                }
            }
        }
        Self { n, layout, gates }
    }
}

/// Exact output distribution of `c` on `|0ⁿ⟩`, indexed as in
/// [`outcome_index`](super::statevec::outcome_index).
pub fn circuit_distribution(c: &CliffordCircuit) -> Result<Vec<f64>> {
    let mut s = DenseState::zero(c.n())?;
    for &g in c.gates() {
        s.apply_gate(g);
    }
    Ok(s.probabilities())
}

/// A gate of `C'` with, for middle Hadamards, their index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FrameGate {
    Plain(Gate),
    Middle(usize, usize),
}

/// The graph state instance equivalent to a circuit, with what is needed to
/// map its samples back.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    /// Graph `G'` on `n + h` qubits with their measurement bases.
    pub instance: GssInstance,
    /// Bits to flip in a sample of `instance` to get the circuit outcomes.
    pub flips: BitVector,
    /// Group map onto the layout.
    pub coarse: CoarseGraining,
    /// Number of middle Hadamards `h`.
    pub middle_h: usize,
    /// Qubit whose outcome is output bit `q`.
    pub outputs: Vec<usize>,
    /// Qubit measured by middle Hadamard gadget `j`.
    pub gadget: Vec<usize>,
    /// `C'` in order, used to push the gadget byproducts to the end.
    frame: Vec<FrameGate>,
}

pub fn reduce_circuit(c: &CliffordCircuit) -> Result<ReducedInstance> {
    let n = c.n();
    let mut frame: Vec<FrameGate> = (0..n).map(|q| FrameGate::Plain(Gate::H(q))).collect();
    let mut middle = 0;
    let mut mid_h = |q: usize, frame: &mut Vec<FrameGate>| {
        frame.push(FrameGate::Middle(middle, q));
        middle += 1;
    };
    for q in 0..n {
        mid_h(q, &mut frame);
    }
    for &g in c.gates() {
        match g {
            Gate::H(q) => mid_h(q, &mut frame),
            g => frame.push(FrameGate::Plain(g)),
        }
    }
    for q in 0..n {
        mid_h(q, &mut frame);
    }
    frame.extend((0..n).map(|q| FrameGate::Plain(Gate::H(q))));

    let mut wire: Vec<usize> = (0..n).collect();
    let mut owner: Vec<usize> = (0..n).collect();
    let mut s_power = vec![0u8; n];
    let mut gadget = Vec::new();
    let mut edges: HashMap<(usize, usize), bool> = HashMap::new();
    let mut toggle = |a: usize, b: usize| *edges.entry((a.min(b), a.max(b))).or_insert(false) ^= true;
    for &fg in &frame[n..frame.len() - n] {
        match fg {
            FrameGate::Middle(_, q) => {
                let fresh = owner.len();
                owner.push(q);
                s_power.push(0);
                toggle(wire[q], fresh);
                gadget.push(wire[q]);
                wire[q] = fresh;
            }
            FrameGate::Plain(Gate::S(q)) => s_power[wire[q]] = (s_power[wire[q]] + 1) % 4,
            FrameGate::Plain(Gate::Cz(a, b)) => toggle(wire[a], wire[b]),
            other => unreachable!("{other:?} inside C'"),
        }
    }
    let total = owner.len();
    let kept: Vec<(usize, usize)> = edges.into_iter().filter(|&(_, on)| on).map(|(e, _)| e).collect();
    let graph = Graph::from_edges(total, &kept)?;
    // Z after H S^k measures S^-k X S^k: X, -Y, -X, Y
    let (bases, flips): (Vec<Basis>, Vec<bool>) = s_power
        .iter()
        .map(|&k| match k {
            0 => (Basis::X, false),
            1 => (Basis::Y, true),
            2 => (Basis::X, true),
            _ => (Basis::Y, false),
        })
        .unzip();
    let coarse = CoarseGraining::new(&graph, c.layout(), owner)?;
    let bound = c.depth() + 4;
    if coarse.r() > bound {
        return Err(Error::Invalid(format!("group of {} qubits exceeds depth + 4 = {bound}", coarse.r())));
    }
    Ok(ReducedInstance {
        instance: GssInstance::without_postselection(graph, bases)?,
        flips: BitVector::from_bools(&flips),
        coarse,
        middle_h: gadget.len(),
        outputs: wire,
        gadget,
        frame,
    })
}

impl ReducedInstance {
    /// X part of `P(z)`, the Pauli with `U_{C'(z)} = P(z) U_C`.
    pub fn push_x(&self, z: &BitVector) -> BitVector {
        let n = self.outputs.len();
        let (mut x, mut zz) = (BitVector::zeros(n), BitVector::zeros(n));
        for &fg in &self.frame {
            let g = match fg {
                FrameGate::Plain(g) => g,
                FrameGate::Middle(_, q) => Gate::H(q),
            };
            match g {
                Gate::H(q) => {
                    let (a, b) = (x.get(q), zz.get(q));
                    x.set(q, b);
                    zz.set(q, a);
                }
                Gate::S(q) => {
                    if x.get(q) {
                        zz.flip(q);
                    }
                }
                Gate::Cz(a, b) => {
                    if x.get(a) {
                        zz.flip(b);
                    }
                    if x.get(b) {
                        zz.flip(a);
                    }
                }
                other => unreachable!("{other:?} in C'"),
            }
            if let FrameGate::Middle(j, q) = fg {
                if z.get(j) {
                    x.flip(q);
                }
            }
        }
        x
    }

    /// Splits a corrected sample of the reduced instance into the output
    /// wires `x` and the gadget outcomes `z`.
    pub fn split(&self, sample: &BitVector) -> (BitVector, BitVector) {
        let m = sample.xor(&self.flips);
        (m.select(&self.outputs), m.select(&self.gadget))
    }
}

/// Compiled sampler for one circuit.
#[derive(Clone, Debug)]
pub struct CircuitSampler {
    reduced: ReducedInstance,
    solver: GssSolver,
    /// X parts of the stabilizer generators `U_C Z_j U_C†`.
    stab_x: Vec<BitVector>,
}

/// One run, with the intermediate string `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitSample {
    /// `g = x ⊕ P(z)_x`, a string in the support of `U_C|0ⁿ⟩`.
    pub g: BitVector,
    pub outcome: BitVector,
}

impl CircuitSampler {
    pub fn new(c: &CliffordCircuit) -> Result<Self> {
        let reduced = reduce_circuit(c)?;
        let solver = coarse_solver(reduced.instance.clone(), &reduced.coarse, c.layout())?;
        let t = c.tableau();
        let stab_x = (0..c.n()).map(|j| t.stabilizer(j).x).collect();
        Ok(Self { reduced, solver, stab_x })
    }

    pub fn reduced(&self) -> &ReducedInstance {
        &self.reduced
    }

    pub fn sample_traced(&self, rng: &mut dyn RngCore) -> Result<CircuitSample> {
        let sample = self
            .solver
            .sample(rng)?
            .map_err(|_| Error::Invalid("reduced instance has no postselection".into()))?;
        let (x, z) = self.reduced.split(&sample);
        let g = x.xor(&self.reduced.push_x(&z));
        let mut outcome = g.clone();
        for s in &self.stab_x {
            if rng.gen::<bool>() {
                outcome.xor_assign(s);
            }
        }
        Ok(CircuitSample { g, outcome })
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Result<BitVector> {
        Ok(self.sample_traced(rng)?.outcome)
    }
}

/// One sample from the output distribution of `c` on `|0ⁿ⟩`.
pub fn simulate_circuit(c: &CliffordCircuit, rng: &mut dyn RngCore) -> Result<BitVector> {
    CircuitSampler::new(c)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_table() {
        let t = single_qubit_cliffords();
        assert_eq!(t.len(), 24);
        assert!(t[0].is_empty());
        assert_eq!(t.iter().map(Vec::len).max(), Some(6));
        assert_eq!(canonical_word(&[true, true]), &[] as &[bool]);
        assert_eq!(canonical_word(&[false, false, false, false]), &[] as &[bool]);
        assert_eq!(named_word("C23").unwrap(), t[23]);
        assert!(named_word("T").is_none());
    }

    #[test]
    fn compiled_gates_match_their_names() {
        let layout = Graph::path(2);
        let c = CliffordCircuit::from_named(layout.clone(), &[("X".into(), vec![0])]).unwrap();
        assert!((circuit_distribution(&c).unwrap()[1] - 1.0).abs() < 1e-12);
        let c = CliffordCircuit::from_named(layout.clone(), &[("X".into(), vec![0]), ("CX".into(), vec![0, 1])]).unwrap();
        assert!((circuit_distribution(&c).unwrap()[3] - 1.0).abs() < 1e-12);
        let c = CliffordCircuit::from_named(layout.clone(), &[("X".into(), vec![0]), ("SWAP".into(), vec![0, 1])]).unwrap();
        assert!((circuit_distribution(&c).unwrap()[2] - 1.0).abs() < 1e-12);
        assert!(CliffordCircuit::from_named(Graph::empty(2), &[("CZ".into(), vec![0, 1])]).is_err());
    }

    #[test]
    fn no_middle_hadamards_beyond_padding() {
        let c = CliffordCircuit::new(Graph::path(3), vec![Gate::Cz(0, 1), Gate::S(2)]).unwrap();
        let r = reduce_circuit(&c).unwrap();
        assert_eq!(r.middle_h, 6);
        assert_eq!(r.instance.graph.n(), 9);
        assert!(r.coarse.r() <= c.depth() + 4);
    }
}
