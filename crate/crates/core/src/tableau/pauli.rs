use std::fmt;

use crate::error::{Error, Result};
use crate::f2la::BitVector;

/// The Pauli operator `i^alpha (-1)^beta X^x Z^z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub alpha: bool,
    pub beta: bool,
    pub x: BitVector,
    pub z: BitVector,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Self {
            alpha: false,
            beta: false,
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    /// `X^x Z^z` with no phase.
    pub fn from_xz(x: BitVector, z: BitVector) -> Self {
        assert_eq!(x.len(), z.len(), "X and Z parts must have equal length");
        Self {
            alpha: false,
            beta: false,
            x,
            z,
        }
    }

    /// The Hermitian Pauli with the given bits, i.e. `i^{x·z} X^x Z^z`.
    pub fn hermitian(x: BitVector, z: BitVector, negative: bool) -> Self {
        let mut p = Self::from_xz(x, z);
        let ny = p.x.and(&p.z).count_ones();
        p.alpha = ny & 1 == 1;
        p.beta = ((ny >> 1) & 1 == 1) ^ negative;
        p
    }

    pub fn single(n: usize, q: usize, letter: char) -> Self {
        let mut x = BitVector::zeros(n);
        let mut z = BitVector::zeros(n);
        match letter {
            'X' => x.set(q, true),
            'Z' => z.set(q, true),
            'Y' => {
                x.set(q, true);
                z.set(q, true);
            }
            _ => {}
        }
        Self::hermitian(x, z, false)
    }

    /// Parses strings such as `"-XIZY"`; a leading `+`, `-`, `i` or `-i` sets the phase.
    pub fn parse(s: &str) -> Result<Self> {
        let (mut alpha, mut beta, body) = if let Some(r) = s.strip_prefix("-i") {
            (true, true, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (false, true, r)
        } else if let Some(r) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
            (true, false, r)
        } else {
            (false, false, s.strip_prefix('+').unwrap_or(s))
        };
        let n = body.chars().count();
        let mut x = BitVector::zeros(n);
        let mut z = BitVector::zeros(n);
        let mut ny = 0usize;
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' | '_' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                    ny += 1;
                }
                _ => return Err(Error::Parse(format!("bad Pauli letter {c:?}"))),
            }
        }
        // Y = i X Z, so each Y contributes one factor of i.
        for _ in 0..ny {
            if alpha {
                beta = !beta;
            }
            alpha = !alpha;
        }
        Ok(Self { alpha, beta, x, z })
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    /// True when the operator is Hermitian, i.e. `alpha = x·z`.
    pub fn is_hermitian(&self) -> bool {
        self.alpha == self.x.dot(&self.z)
    }

    /// Sign of a Hermitian Pauli relative to its letter string: false for `+`.
    pub fn hermitian_sign(&self) -> bool {
        debug_assert!(self.is_hermitian());
        let ny = self.x.and(&self.z).count_ones();
        self.beta ^ ((ny >> 1) & 1 == 1)
    }

    /// Concatenated `(x|z)` bits.
    pub fn bits(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    pub fn from_bits(bits: &BitVector) -> Self {
        let n = bits.len() / 2;
        Self::from_xz(bits.slice(0, n), bits.slice(n, 2 * n))
    }

    /// True when `self` and `other` commute.
    pub fn commutes(&self, other: &Pauli) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Letter string with a leading sign, for Hermitian operators.
    pub fn to_letters(&self) -> String {
        let mut out = String::new();
        if self.is_hermitian() {
            out.push(if self.hermitian_sign() { '-' } else { '+' });
        } else {
            out.push_str(if self.beta { "-i" } else { "+i" });
        }
        for q in 0..self.num_qubits() {
            out.push(match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            });
        }
        out
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Pauli(alpha={}, beta={}, {})",
            self.alpha as u8,
            self.beta as u8,
            self.to_letters()
        )
    }
}

/// The product `p1 · p2`.
pub fn pauli_mul(p1: &Pauli, p2: &Pauli) -> Result<Pauli> {
    if p1.num_qubits() != p2.num_qubits() {
        return Err(Error::Dimension(format!(
            "cannot multiply Paulis on {} and {} qubits",
            p1.num_qubits(),
            p2.num_qubits()
        )));
    }
    Ok(Pauli {
        alpha: p1.alpha ^ p2.alpha,
        beta: p1.beta ^ p2.beta ^ (p1.alpha & p2.alpha) ^ p1.z.dot(&p2.x),
        x: p1.x.xor(&p2.x),
        z: p1.z.xor(&p2.z),
    })
}
