//! Dense statevector simulation, used as the exact reference distribution.
//!
//! Qubit `q` is bit `q` of the basis-state index.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::f2la::BitVector;
use crate::tableau::{Basis, Gate, Pauli};
use crate::treedecomp::Graph;

/// Largest register the oracle accepts.
pub const MAX_QUBITS: usize = 14;

#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amp: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Invalid(format!("{n} qubits exceeds the oracle limit of {MAX_QUBITS}")));
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        amp[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amp })
    }

    pub fn plus(n: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        for q in 0..n {
            s.h(q);
        }
        Ok(s)
    }

    /// `|G⟩ = Π CZ_e |+ⁿ⟩`.
    pub fn graph_state(g: &Graph) -> Result<Self> {
        let mut s = Self::plus(g.n())?;
        for (u, v) in g.edges() {
            s.cz(u, v);
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn from_amplitudes(amp: Vec<Complex64>) -> Result<Self> {
        let n = amp.len().trailing_zeros() as usize;
        if 1usize << n != amp.len() {
            return Err(Error::Invalid("amplitude count must be a power of two".into()));
        }
        Ok(Self { n, amp })
    }

    pub fn h(&mut self, q: usize) {
        let bit = 1usize << q;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let (a, b) = (self.amp[i], self.amp[i | bit]);
                self.amp[i] = (a + b) * r;
                self.amp[i | bit] = (a - b) * r;
            }
        }
    }

    fn phase_on_one(&mut self, q: usize, ph: Complex64) {
        let bit = 1usize << q;
        for (i, a) in self.amp.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= ph;
            }
        }
    }

    pub fn s(&mut self, q: usize) {
        self.phase_on_one(q, Complex64::new(0.0, 1.0));
    }

    pub fn sdg(&mut self, q: usize) {
        self.phase_on_one(q, Complex64::new(0.0, -1.0));
    }

    pub fn z(&mut self, q: usize) {
        self.phase_on_one(q, Complex64::new(-1.0, 0.0));
    }

    pub fn x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                self.amp.swap(i, i | bit);
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let m = (1usize << a) | (1usize << b);
        for (i, v) in self.amp.iter_mut().enumerate() {
            if i & m == m {
                *v = -*v;
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amp.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amp.swap(i, i | tb);
            }
        }
    }

    pub fn apply_gate(&mut self, g: Gate) {
        match g {
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q),
            Gate::Sdg(q) => self.sdg(q),
            Gate::X(q) => self.x(q),
            Gate::Z(q) => self.z(q),
            Gate::YBasisChange(q) => {
                self.sdg(q);
                self.h(q);
            }
            Gate::Cz(a, b) => self.cz(a, b),
            Gate::Cnot(c, t) => self.cnot(c, t),
        }
    }

    pub fn apply_bases(&mut self, bases: &[Basis]) {
        for (q, b) in bases.iter().enumerate() {
            for g in b.change_gates(q) {
                self.apply_gate(g);
            }
        }
    }

    /// Applies `i^alpha (-1)^beta X^x Z^z`.
    pub fn apply_pauli(&mut self, p: &Pauli) {
        for q in p.z.ones_iter() {
            self.z(q);
        }
        for q in p.x.ones_iter() {
            self.x(q);
        }
        let mut ph = Complex64::new(1.0, 0.0);
        if p.alpha {
            ph *= Complex64::new(0.0, 1.0);
        }
        if p.beta {
            ph = -ph;
        }
        for a in self.amp.iter_mut() {
            *a *= ph;
        }
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    /// True when `P|ψ⟩ = |ψ⟩` within `tol`.
    pub fn is_stabilized_by(&self, p: &Pauli, tol: f64) -> bool {
        let mut other = self.clone();
        other.apply_pauli(p);
        other.amp.iter().zip(&self.amp).all(|(a, b)| (a - b).norm() < tol)
    }

    /// True when the two states agree up to a global scalar, within `tol`.
    pub fn proportional_to(&self, other: &DenseState, tol: f64) -> bool {
        let na = self.norm_sqr().sqrt();
        let nb = other.norm_sqr().sqrt();
        if na < tol || nb < tol {
            return na < tol && nb < tol;
        }
        let ov = self.inner(other);
        (ov.norm() / (na * nb) - 1.0).abs() < tol
    }

    /// Born probabilities indexed by outcome integer.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Projects the qubits in `qubits` onto `|bits⟩` and drops them, without renormalizing.
    pub fn project_out(&self, qubits: &[usize], bits: &BitVector) -> DenseState {
        let keep: Vec<usize> = (0..self.n).filter(|q| !qubits.contains(q)).collect();
        let mut fixed = 0usize;
        for (i, &q) in qubits.iter().enumerate() {
            if bits.get(i) {
                fixed |= 1 << q;
            }
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << keep.len()];
        for (j, a) in amp.iter_mut().enumerate() {
            let mut idx = fixed;
            for (k, &q) in keep.iter().enumerate() {
                if (j >> k) & 1 == 1 {
                    idx |= 1 << q;
                }
            }
            *a = self.amp[idx];
        }
        DenseState { n: keep.len(), amp }
    }
}

/// Exact outcome distribution of a Pauli-basis measurement on a graph state.
pub fn graph_distribution(g: &Graph, bases: &[Basis]) -> Result<Vec<f64>> {
    if bases.len() != g.n() {
        return Err(Error::Dimension("one basis per vertex required".into()));
    }
    let mut s = DenseState::graph_state(g)?;
    s.apply_bases(bases);
    Ok(s.probabilities())
}

/// Distribution of the sampled coordinates conditioned on `post` outcomes.
///
/// The result is indexed by the integer whose bit `i` is the outcome of
/// `sampled[i]`. `None` when the conditioning event has probability zero.
pub fn conditional_distribution(
    probs: &[f64],
    sampled: &[usize],
    post: &[(usize, bool)],
) -> Option<Vec<f64>> {
    let mut out = vec![0.0; 1 << sampled.len()];
    for (idx, &pr) in probs.iter().enumerate() {
        if post.iter().all(|&(q, b)| ((idx >> q) & 1 == 1) == b) {
            let mut k = 0;
            for (i, &q) in sampled.iter().enumerate() {
                if (idx >> q) & 1 == 1 {
                    k |= 1 << i;
                }
            }
            out[k] += pr;
        }
    }
    let total: f64 = out.iter().sum();
    if total < 1e-12 {
        return None;
    }
    out.iter_mut().for_each(|p| *p /= total);
    Some(out)
}

/// Index of a bit string, with bit `i` of the result equal to `v[i]`.
pub fn outcome_index(v: &BitVector) -> usize {
    v.ones_iter().fold(0, |acc, i| acc | (1 << i))
}
