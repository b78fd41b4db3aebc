use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Tableau;
use crate::error::{Error, Result};

/// Elementary Clifford gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Z(usize),
    /// `H · S†`, which maps `Y` to `Z`.
    YBasisChange(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Z(q) | Gate::YBasisChange(q) => vec![q],
            Gate::Cz(a, b) | Gate::Cnot(a, b) => vec![a, b],
        }
    }

    pub fn inverse(&self) -> Vec<Gate> {
        match *self {
            Gate::S(q) => vec![Gate::Sdg(q)],
            Gate::Sdg(q) => vec![Gate::S(q)],
            Gate::YBasisChange(q) => vec![Gate::H(q), Gate::S(q)],
            g => vec![g],
        }
    }
}

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn from_char(c: char) -> Result<Basis> {
        match c.to_ascii_uppercase() {
            'X' => Ok(Basis::X),
            'Y' => Ok(Basis::Y),
            'Z' => Ok(Basis::Z),
            _ => Err(Error::Parse(format!("unknown basis {c:?}"))),
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Basis>> {
        s.chars().filter(|c| !c.is_whitespace()).map(Basis::from_char).collect()
    }

    pub fn letter(self) -> char {
        match self {
            Basis::X => 'X',
            Basis::Y => 'Y',
            Basis::Z => 'Z',
        }
    }

    /// Gates rotating this basis onto the computational one.
    pub fn change_gates(self, q: usize) -> Vec<Gate> {
        match self {
            Basis::X => vec![Gate::H(q)],
            Basis::Y => vec![Gate::Sdg(q), Gate::H(q)],
            Basis::Z => vec![],
        }
    }
}

/// Applies `gate` after the unitary described by `t`.
pub fn apply_gate(t: &mut Tableau, gate: Gate) -> Result<()> {
    let n = t.num_qubits();
    for q in gate.qubits() {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, size: n });
        }
    }
    if let Gate::Cz(a, b) | Gate::Cnot(a, b) = gate {
        if a == b {
            return Err(Error::Invalid("two-qubit gate on a single qubit".into()));
        }
    }
    if let Gate::YBasisChange(q) = gate {
        apply_gate(t, Gate::Sdg(q))?;
        return apply_gate(t, Gate::H(q));
    }
    let (m, p, s) = t.parts_mut();
    for j in 0..2 * n {
        match gate {
            Gate::H(q) => {
                let (a, b) = (m.get(j, q), m.get(j, n + q));
                if a && b {
                    s.flip(j);
                }
                m.set(j, q, b);
                m.set(j, n + q, a);
            }
            Gate::S(q) => {
                if m.get(j, q) {
                    if p.get(j) {
                        s.flip(j);
                    }
                    p.flip(j);
                    m.flip(j, n + q);
                }
            }
            Gate::Sdg(q) => {
                if m.get(j, q) {
                    if !p.get(j) {
                        s.flip(j);
                    }
                    p.flip(j);
                    m.flip(j, n + q);
                }
            }
            Gate::X(q) => {
                if m.get(j, n + q) {
                    s.flip(j);
                }
            }
            Gate::Z(q) => {
                if m.get(j, q) {
                    s.flip(j);
                }
            }
            Gate::Cz(a, b) => {
                let (xa, xb) = (m.get(j, a), m.get(j, b));
                if xa && xb {
                    s.flip(j);
                }
                if xb {
                    m.flip(j, n + a);
                }
                if xa {
                    m.flip(j, n + b);
                }
            }
            Gate::Cnot(c, tq) => {
                if m.get(j, c) {
                    m.flip(j, tq);
                }
                if m.get(j, n + tq) {
                    m.flip(j, n + c);
                }
            }
            Gate::YBasisChange(_) => unreachable!(),
        }
    }
    Ok(())
}

/// Random Clifford built from `depth` random gates.
pub fn random_clifford<R: Rng + ?Sized>(n: usize, depth: usize, rng: &mut R) -> (Tableau, Vec<Gate>) {
    let mut t = Tableau::identity(n);
    let gates = random_gates(n, depth, rng);
    for &g in &gates {
        apply_gate(&mut t, g).expect("generated gate is in range");
    }
    (t, gates)
}

pub(crate) fn random_gates<R: Rng + ?Sized>(n: usize, depth: usize, rng: &mut R) -> Vec<Gate> {
    let mut out = Vec::with_capacity(depth);
    if n == 0 {
        return out;
    }
    for _ in 0..depth {
        let q = rng.gen_range(0..n);
        let kind = rng.gen_range(0..if n > 1 { 8 } else { 6 });
        let r = if n > 1 {
            let mut r = rng.gen_range(0..n - 1);
            if r >= q {
                r += 1;
            }
            r
        } else {
            0
        };
        out.push(match kind {
            0 => Gate::H(q),
            1 => Gate::S(q),
            2 => Gate::Sdg(q),
            3 => Gate::X(q),
            4 => Gate::Z(q),
            5 => Gate::YBasisChange(q),
            6 => Gate::Cz(q, r),
            _ => Gate::Cnot(q, r),
        });
    }
    out
}
