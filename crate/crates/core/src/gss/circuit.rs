//! Compilation of a nice tree decomposition into the gadget circuit.

use crate::error::{Error, Result};
use crate::tableau::Gate;
use crate::treedecomp::{validate_td, Graph, NodeKind, TreeDecomposition};

/// One gadget. Qubit labels are global: vertex `v`'s data qubit is `v` and
/// merge ancillas are `n, n+1, ...` in allocation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gadget {
    /// Fresh `|+⟩` qubits.
    Introduce { qubits: Vec<usize> },
    /// CZ gates, then the listed qubits leave the circuit.
    Forget { cz: Vec<(usize, usize)>, measured: Vec<usize> },
    /// `(source, ancilla)` CNOT pairs; each ancilla is then measured in Z.
    Merge { pairs: Vec<(usize, usize)> },
}

/// A gadget together with its place in the tree.
#[derive(Clone, Debug)]
pub struct GadgetStep {
    /// Node of the decomposition this step came from.
    pub node: usize,
    /// Indices of the child steps.
    pub children: Vec<usize>,
    pub gadget: Gadget,
    /// Qubits entering the gadget: the children's outputs in order, then any
    /// introduced qubits.
    pub input: Vec<usize>,
    /// Qubits passed to the parent, in input order.
    pub output: Vec<usize>,
    local_gates: Vec<Gate>,
    measured_local: Vec<usize>,
    output_local: Vec<usize>,
}

impl GadgetStep {
    /// Gates of the gadget with qubits numbered by position in `input`.
    pub fn local_gates(&self) -> &[Gate] {
        &self.local_gates
    }

    /// Positions in `input` of the qubits measured by this gadget.
    pub fn measured_local(&self) -> &[usize] {
        &self.measured_local
    }

    /// Positions in `input` of the output qubits.
    pub fn output_local(&self) -> &[usize] {
        &self.output_local
    }

    pub fn measured(&self) -> Vec<usize> {
        self.measured_local.iter().map(|&i| self.input[i]).collect()
    }
}

/// The CZ/CNOT circuit whose structure mirrors a nice tree decomposition.
#[derive(Clone, Debug)]
pub struct GadgetCircuit {
    n_data: usize,
    /// Vertex of each merge ancilla.
    ancilla_vertex: Vec<usize>,
    /// Steps in postorder; the last one is the root.
    steps: Vec<GadgetStep>,
}

impl GadgetCircuit {
    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn n_ancilla(&self) -> usize {
        self.ancilla_vertex.len()
    }

    /// `n_t = n + n_a`.
    pub fn n_total(&self) -> usize {
        self.n_data + self.ancilla_vertex.len()
    }

    pub fn steps(&self) -> &[GadgetStep] {
        &self.steps
    }

    pub fn root_step(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_ancilla(&self, q: usize) -> bool {
        q >= self.n_data
    }

    /// Graph vertex a qubit stands for.
    pub fn qubit_vertex(&self, q: usize) -> usize {
        if q < self.n_data {
            q
        } else {
            self.ancilla_vertex[q - self.n_data]
        }
    }

    /// Every gate of the circuit in a valid time order.
    pub fn gates(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        for s in &self.steps {
            match &s.gadget {
                Gadget::Introduce { .. } => {}
                Gadget::Forget { cz, .. } => out.extend(cz.iter().map(|&(a, b)| Gate::Cz(a, b))),
                Gadget::Merge { pairs } => out.extend(pairs.iter().map(|&(c, t)| Gate::Cnot(c, t))),
            }
        }
        out
    }

    pub fn gate_count(&self) -> usize {
        self.gates().len()
    }
}

/// Builds the gadget circuit for `g` from a nice decomposition with an empty
/// root bag.
pub fn build_circuit(g: &Graph, t: &TreeDecomposition) -> Result<GadgetCircuit> {
    let n = g.n();
    let diag = validate_td(g, t);
    if !diag.is_valid() {
        return Err(Error::Invalid(format!("not a tree decomposition of the graph:\n{}", diag.summary())));
    }
    if !t.bag(t.root()).is_empty() {
        return Err(Error::Invalid("root bag must be empty".into()));
    }
    // Provisional qubit ids are handed out at introduce nodes; a copy becomes
    // a data qubit or an ancilla only once the whole tree has been read.
    let mut prov_vertex: Vec<usize> = Vec::new();
    let mut prov_ancilla: Vec<Option<usize>> = Vec::new();
    let mut n_anc = 0usize;
    let mut prov_final = Vec::new();
    // (vertex, provisional qubit) pairs live at the top of each processed step
    let mut live: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut steps: Vec<GadgetStep> = Vec::new();
    let mut step_of = vec![usize::MAX; t.num_nodes()];
    for v in t.postorder() {
        let kind = t.shape_kind(v).ok_or_else(|| Error::Invalid(format!("node {v} is not nice")))?;
        let children: Vec<usize> = t.children(v).iter().map(|&c| step_of[c]).collect();
        let mut input: Vec<(usize, usize)> = children.iter().flat_map(|&c| live[c].iter().copied()).collect();
        let bag = t.bag(v);
        let (gadget, output) = match kind {
            NodeKind::Introduce => {
                let mut fresh = Vec::new();
                for &x in bag {
                    if !input.iter().any(|&(w, _)| w == x) {
                        let q = prov_vertex.len();
                        prov_vertex.push(x);
                        prov_ancilla.push(None);
                        fresh.push(q);
                        input.push((x, q));
                    }
                }
                (Gadget::Introduce { qubits: fresh }, input.clone())
            }
            NodeKind::Forget => {
                let gone = |x: usize| bag.binary_search(&x).is_err();
                let mut cz = Vec::new();
                for (i, &(x, qx)) in input.iter().enumerate() {
                    for &(y, qy) in &input[i + 1..] {
                        if (gone(x) || gone(y)) && g.has_edge(x, y) {
                            cz.push((qx, qy));
                        }
                    }
                }
                let measured: Vec<usize> = input.iter().filter(|&&(x, _)| gone(x)).map(|&(_, q)| q).collect();
                let output = input.iter().copied().filter(|&(x, _)| !gone(x)).collect();
                (Gadget::Forget { cz, measured }, output)
            }
            NodeKind::Merge => {
                let (a, b) = (&live[children[0]], &live[children[1]]);
                let mut pairs = Vec::new();
                for &(x, q1) in a {
                    if let Some(&(_, q2)) = b.iter().find(|&&(y, _)| y == x) {
                        prov_ancilla[q1] = Some(n_anc);
                        n_anc += 1;
                        pairs.push((q2, q1));
                    }
                }
                let output = input.iter().copied().filter(|&(_, q)| prov_ancilla[q].is_none()).collect();
                (Gadget::Merge { pairs }, output)
            }
        };
        step_of[v] = steps.len();
        steps.push(GadgetStep {
            node: v,
            children,
            gadget,
            input: input.iter().map(|&(_, q)| q).collect(),
            output: output.iter().map(|&(_, q): &(usize, usize)| q).collect(),
            local_gates: Vec::new(),
            measured_local: Vec::new(),
            output_local: Vec::new(),
        });
        live.push(output);
    }
    prov_final.resize(prov_vertex.len(), 0);
    let mut ancilla_vertex = vec![0; n_anc];
    for q in 0..prov_vertex.len() {
        prov_final[q] = match prov_ancilla[q] {
            Some(i) => {
                ancilla_vertex[i] = prov_vertex[q];
                n + i
            }
            None => prov_vertex[q],
        };
    }
    let mut pos = vec![usize::MAX; n + n_anc];
    for s in &mut steps {
        let f = |q: &mut usize| *q = prov_final[*q];
        s.input.iter_mut().for_each(f);
        s.output.iter_mut().for_each(f);
        match &mut s.gadget {
            Gadget::Introduce { qubits } => qubits.iter_mut().for_each(f),
            Gadget::Forget { cz, measured } => {
                cz.iter_mut().for_each(|(a, b)| {
                    f(a);
                    f(b)
                });
                measured.iter_mut().for_each(f);
            }
            Gadget::Merge { pairs } => pairs.iter_mut().for_each(|(a, b)| {
                f(a);
                f(b)
            }),
        }
        for (i, &q) in s.input.iter().enumerate() {
            pos[q] = i;
        }
        let (gates, measured): (Vec<Gate>, Vec<usize>) = match &s.gadget {
            Gadget::Introduce { .. } => (Vec::new(), Vec::new()),
            Gadget::Forget { cz, measured } => {
                (cz.iter().map(|&(a, b)| Gate::Cz(pos[a], pos[b])).collect(), measured.iter().map(|&q| pos[q]).collect())
            }
            Gadget::Merge { pairs } => (
                pairs.iter().map(|&(c, t)| Gate::Cnot(pos[c], pos[t])).collect(),
                pairs.iter().map(|&(_, t)| pos[t]).collect(),
            ),
        };
        s.local_gates = gates;
        s.measured_local = measured;
        s.output_local = s.output.iter().map(|&q| pos[q]).collect();
    }
    Ok(GadgetCircuit { n_data: n, ancilla_vertex, steps })
}

/// The graph `G'` with `𝒞|+^{n_t}⟩ = |G'⟩`, found by pushing every CNOT to
/// the start of the circuit where it acts trivially.
pub fn derive_gprime(c: &GadgetCircuit) -> Graph {
    let mut g = Graph::empty(c.n_total());
    for gate in c.gates() {
        match gate {
            Gate::Cz(a, b) => g.toggle_edge(a, b),
            Gate::Cnot(ctl, tgt) => {
                // CNOT·CZ(a,t) = CZ(a,t)·CZ(a,c)·CNOT
                for a in g.neighbors(tgt).to_vec() {
                    g.toggle_edge(a, ctl);
                }
            }
            _ => unreachable!("gadget circuits only contain CZ and CNOT"),
        }
    }
    g
}
