//! Correction subroutines: turn a raw sample `y` into a valid outcome.

use rand::{Rng, RngCore};

use super::circuit::{Gadget, GadgetCircuit};
use super::sample::step_gates;
use super::GssInstance;
use crate::error::{Error, Result};
use crate::f2la::{mm, AffineSubspace, BitMatrix, BitVector};
use crate::tableau::{apply_gate, Basis, Pauli, Tableau};
use crate::treedecomp::Graph;

/// Per-coordinate constraint on the X and Z components of a Pauli;
/// `None` is `*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub x_part: Vec<Option<bool>>,
    pub z_part: Vec<Option<bool>>,
}

impl Pattern {
    pub fn free(n: usize) -> Self {
        Self { x_part: vec![None; n], z_part: vec![None; n] }
    }

    pub fn len(&self) -> usize {
        self.x_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_part.is_empty()
    }

    /// Parses `"*1**1,*****"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (x, z) = s.split_once(',').ok_or_else(|| Error::Parse("pattern needs an X and a Z part".into()))?;
        let part = |p: &str| -> Result<Vec<Option<bool>>> {
            p.trim()
                .chars()
                .map(|c| match c {
                    '*' => Ok(None),
                    '0' => Ok(Some(false)),
                    '1' => Ok(Some(true)),
                    _ => Err(Error::Parse(format!("bad pattern symbol {c:?}"))),
                })
                .collect()
        };
        let (x_part, z_part) = (part(x)?, part(z)?);
        if x_part.len() != z_part.len() {
            return Err(Error::Parse("pattern halves differ in length".into()));
        }
        Ok(Self { x_part, z_part })
    }

    pub fn respects(&self, p: &Pauli) -> bool {
        let ok = |pat: &[Option<bool>], bits: &BitVector| pat.iter().enumerate().all(|(i, c)| c.map_or(true, |b| bits.get(i) == b));
        p.num_qubits() == self.len() && ok(&self.x_part, &p.x) && ok(&self.z_part, &p.z)
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = |p: &[Option<bool>]| -> String {
            p.iter().map(|c| match c {
                None => '*',
                Some(false) => '0',
                Some(true) => '1',
            }).collect()
        };
        write!(f, "{},{}", s(&self.x_part), s(&self.z_part))
    }
}

/// Pattern forcing merge ancillas to read 0 and postselected data qubits to
/// read their target values, given the raw sample `y`.
pub fn build_pattern(inst: &GssInstance, c: &GadgetCircuit, y: &BitVector) -> Result<Pattern> {
    let nt = c.n_total();
    if y.len() != nt {
        return Err(Error::Dimension(format!("y has length {}, circuit has {nt} qubits", y.len())));
    }
    let mut p = Pattern::free(nt);
    for q in c.n_data()..nt {
        p.x_part[q] = Some(y.get(q));
    }
    for (&v, &m) in &inst.postselect {
        p.x_part[v] = Some(y.get(v) ^ m);
    }
    Ok(p)
}

/// Symplectic images of the basis Paulis as columns: `col_j = M_row_j`.
fn conj_space(u: &Tableau, a: &AffineSubspace) -> AffineSubspace {
    let mt = u.matrix().transpose();
    let basis = mm(&mt, a.basis());
    let offset = mt.mul_vec(a.offset()).expect("width matches");
    AffineSubspace::from_independent(basis, offset).expect("shapes agree")
}

/// Coordinates `(x_i, z_i)` of the listed local qubits in a `k`-qubit space.
fn xz_coords(idx: &[usize], k: usize) -> Vec<usize> {
    idx.iter().copied().chain(idx.iter().map(|&i| k + i)).collect()
}

/// Direct sum of spaces over `k_i` qubits each, laid out as all X
/// coordinates followed by all Z coordinates.
fn join(parts: &[(&AffineSubspace, usize)]) -> AffineSubspace {
    let mut sum = AffineSubspace::point(BitVector::zeros(0));
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    let mut off = 0;
    for &(a, k) in parts {
        sum = sum.direct_sum(a);
        xs.extend(off..off + k);
        zs.extend(off + k..off + 2 * k);
        off += 2 * k;
    }
    xs.extend(zs);
    let basis = sum.basis().select_rows(&xs);
    let offset = sum.offset().select(&xs);
    AffineSubspace::from_independent(basis, offset).expect("row permutation keeps independence")
}

/// Stabilizers of `|+^k⟩`.
fn plus_space(k: usize) -> AffineSubspace {
    let basis = BitMatrix::identity(k).vstack(&BitMatrix::zeros(k, k)).expect("widths agree");
    AffineSubspace::from_independent(basis, BitVector::zeros(2 * k)).expect("shapes agree")
}

/// The affine spaces built bottom-up by the general correction.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    n_total: usize,
    /// Per step: stabilizers over the step's input qubits after its gates,
    /// with the pattern enforced on the qubits it measures.
    full: Vec<AffineSubspace>,
    /// Per step: `full` restricted to the output qubits.
    restricted: Vec<AffineSubspace>,
    /// Per step: inverse of the local unitary.
    inverse: Vec<Tableau>,
    circuit: GadgetCircuit,
}

impl StabilizerChain {
    /// Bottom-up pass. `None` when some space becomes empty, i.e. no
    /// stabilizer respects the pattern.
    pub fn build(c: &GadgetCircuit, bases: &[Basis], pattern: &Pattern) -> Result<Option<Self>> {
        let nt = c.n_total();
        if pattern.len() != nt {
            return Err(Error::Dimension(format!("pattern over {} qubits, circuit has {nt}", pattern.len())));
        }
        if bases.len() != c.n_data() {
            return Err(Error::Dimension(format!("{} bases for {} data qubits", bases.len(), c.n_data())));
        }
        let steps = c.steps();
        let mut full = Vec::with_capacity(steps.len());
        let mut restricted: Vec<AffineSubspace> = Vec::with_capacity(steps.len());
        let mut inverse = Vec::with_capacity(steps.len());
        for s in steps {
            let k = s.input.len();
            let intro = match &s.gadget {
                Gadget::Introduce { qubits } => plus_space(qubits.len()),
                _ => plus_space(0),
            };
            let mut parts: Vec<(&AffineSubspace, usize)> =
                s.children.iter().map(|&ch| (&restricted[ch], steps[ch].output.len())).collect();
            parts.push((&intro, intro.ambient_dim() / 2));
            let mut space = join(&parts);
            let mut u = Tableau::identity(k);
            for g in step_gates(c, s, bases) {
                apply_gate(&mut u, g)?;
            }
            if !s.local_gates().is_empty() || !s.measured_local().is_empty() {
                space = conj_space(&u, &space);
            }
            let mut idx = Vec::new();
            let mut vals = Vec::new();
            for &i in s.measured_local() {
                let q = s.input[i];
                if let Some(b) = pattern.x_part[q] {
                    idx.push(i);
                    vals.push(b);
                }
                if let Some(b) = pattern.z_part[q] {
                    idx.push(k + i);
                    vals.push(b);
                }
            }
            let Some(space) = space.enforce(&idx, &BitVector::from_bools(&vals))? else {
                return Ok(None);
            };
            restricted.push(space.restrict(&xz_coords(s.output_local(), k)));
            full.push(space);
            inverse.push(u.inverse());
        }
        Ok(Some(Self { n_total: nt, full, restricted, inverse, circuit: c.clone() }))
    }

    /// Space of step `i` over its input qubits, after its gates.
    pub fn full_space(&self, i: usize) -> &AffineSubspace {
        &self.full[i]
    }

    /// Space of step `i` over its output qubits.
    pub fn space(&self, i: usize) -> &AffineSubspace {
        &self.restricted[i]
    }

    /// Top-down pass: a uniformly random element of `Stab ∩ Π`.
    pub fn sample(&self, rng: &mut dyn RngCore) -> Pauli {
        let nt = self.n_total;
        let mut x = BitVector::zeros(nt);
        let mut z = BitVector::zeros(nt);
        let steps = self.circuit.steps();
        let mut stack = vec![(self.circuit.root_step(), BitVector::zeros(0))];
        while let Some((i, w)) = stack.pop() {
            let s = &steps[i];
            let k = s.input.len();
            let fixed = self.full[i]
                .enforce(&xz_coords(s.output_local(), k), &w)
                .expect("shapes agree")
                .expect("parent choice lies in the restricted space");
            let v = fixed.sample_uniform(rng);
            for &j in s.measured_local() {
                x.set(s.input[j], v.get(j));
                z.set(s.input[j], v.get(k + j));
            }
            let u = self.inverse[i].matrix().vec_mul(&v).expect("width matches");
            let mut off = 0;
            for &ch in &s.children {
                let kc = steps[ch].output.len();
                let sel: Vec<usize> = (off..off + kc).chain(k + off..k + off + kc).collect();
                stack.push((ch, u.select(&sel)));
                off += kc;
            }
        }
        Pauli::hermitian(x, z, false)
    }
}

/// Uniformly random Pauli stabilizing `(U_bases ⊗ I)𝒞|+^{n_t}⟩` and
/// respecting `pattern`, or `None` if there is none.
pub fn correct_general(
    c: &GadgetCircuit,
    bases: &[Basis],
    pattern: &Pattern,
    rng: &mut dyn RngCore,
) -> Result<Option<Pauli>> {
    Ok(StabilizerChain::build(c, bases, pattern)?.map(|chain| chain.sample(rng)))
}

/// `X^s Z^t` on one qubit after rotating `basis` onto Z.
fn rotate(basis: Basis, s: bool, t: bool) -> (bool, bool) {
    match basis {
        Basis::X => (t, s),
        Basis::Y => (s ^ t, s),
        Basis::Z => (s, t),
    }
}

/// Correction for instances without postselected data qubits:
/// `(U_bases ⊗ I) X^y Z^{A'y} (U_bases† ⊗ I)`, which clears every ancilla bit.
pub fn correct_simple(inst: &GssInstance, gprime: &Graph, y: &BitVector) -> Result<Pauli> {
    if !inst.postselect.is_empty() {
        return Err(Error::Invalid("simple correction requires an empty postselection set".into()));
    }
    let nt = gprime.n();
    if y.len() != nt {
        return Err(Error::Dimension(format!("y has length {}, G' has {nt} vertices", y.len())));
    }
    let mut x = y.clone();
    let mut z = BitVector::zeros(nt);
    for q in y.ones_iter() {
        for &w in gprime.neighbors(q) {
            z.flip(w);
        }
    }
    for (v, &b) in inst.bases.iter().enumerate() {
        let (a, c) = rotate(b, x.get(v), z.get(v));
        x.set(v, a);
        z.set(v, c);
    }
    Ok(Pauli::hermitian(x, z, false))
}

/// Multiplies a uniformly random stabilizer of the measured graph state into
/// the valid outcome `z`; the result is uniform over all valid outcomes.
pub fn uniformize(z: &BitVector, g: &Graph, bases: &[Basis], rng: &mut dyn RngCore) -> BitVector {
    let n = g.n();
    let s: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut t = vec![false; n];
    for v in (0..n).filter(|&v| s[v]) {
        for &w in g.neighbors(v) {
            t[w] ^= true;
        }
    }
    let mut out = z.clone();
    for v in 0..n {
        if rotate(bases[v], s[v], t[v]).0 {
            out.flip(v);
        }
    }
    out
}
