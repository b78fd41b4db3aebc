//! Stabilizer tableaux over the bit-packed core.
//!
//! A [`Tableau`] on `n` qubits stores the images of `X_0..X_{n-1}` (rows
//! `0..n`, the destabilizers of a state) and of `Z_0..Z_{n-1}` (rows `n..2n`,
//! the stabilizers) under conjugation by a Clifford unitary `Q`. Row `j` reads
//! `i^{p_j} (-1)^{s_j} X^{a_j} Z^{b_j}` with `(a_j | b_j)` the `j`-th row of `M`.
//! As a state, a tableau denotes `Q|0ⁿ⟩`.

mod gates;
mod measure;
mod pauli;
mod products;

pub use gates::{apply_gate, random_clifford, Basis, Gate};
pub use measure::{
    measure_bases, measure_z_subset, reference, sample_with_postselection, MeasureMode, MeasurementResult,
};
pub use pauli::{pauli_mul, Pauli};
pub use products::Regime;

use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector};
use products::row_products;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tableau {
    n: usize,
    m: BitMatrix,
    p: BitVector,
    s: BitVector,
}

impl Tableau {
    /// Identity unitary, equivalently the state `|0ⁿ⟩`.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            m: BitMatrix::identity(2 * n),
            p: BitVector::zeros(2 * n),
            s: BitVector::zeros(2 * n),
        }
    }

    /// `H^{⊗n}`, equivalently the state `|+ⁿ⟩`.
    pub fn plus_state(n: usize) -> Self {
        let mut m = BitMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            m.set(j, n + j, true);
            m.set(n + j, j, true);
        }
        Self {
            n,
            m,
            p: BitVector::zeros(2 * n),
            s: BitVector::zeros(2 * n),
        }
    }

    /// Graph state `|G⟩` for a symmetric adjacency matrix with zero diagonal.
    pub fn graph_state(adjacency: &BitMatrix) -> Result<Self> {
        let mut t = Self::plus_state(adjacency.rows());
        t.apply_cz_batch(adjacency)?;
        Ok(t)
    }

    /// Builds a tableau from raw parts, recomputing `p` from `M`.
    pub fn from_parts(m: BitMatrix, s: BitVector) -> Result<Self> {
        if m.rows() != m.cols() || m.rows() % 2 != 0 || s.len() != m.rows() {
            return Err(Error::Dimension("tableau parts must be 2n×2n and 2n".into()));
        }
        let n = m.rows() / 2;
        let p = phases_of(&m, n);
        Ok(Self { n, m, p, s })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.m
    }

    pub fn phases(&self) -> &BitVector {
        &self.p
    }

    pub fn signs(&self) -> &BitVector {
        &self.s
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut BitMatrix, &mut BitVector, &mut BitVector) {
        (&mut self.m, &mut self.p, &mut self.s)
    }

    /// Row `j` as a Pauli.
    pub fn row(&self, j: usize) -> Pauli {
        let r = self.m.row(j);
        Pauli {
            alpha: self.p.get(j),
            beta: self.s.get(j),
            x: r.slice(0, self.n),
            z: r.slice(self.n, 2 * self.n),
        }
    }

    pub fn set_row(&mut self, j: usize, pauli: &Pauli) {
        self.m.set_row(j, &pauli.bits());
        self.p.set(j, pauli.alpha);
        self.s.set(j, pauli.beta);
    }

    pub fn destabilizer(&self, q: usize) -> Pauli {
        self.row(q)
    }

    pub fn stabilizer(&self, q: usize) -> Pauli {
        self.row(self.n + q)
    }

    pub fn stabilizers(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.stabilizer(q)).collect()
    }

    /// Checks `MᵀΩM = Ω` and `p = diag(M Λ Mᵀ)`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let x = self.m.col_range(0, n);
        let z = self.m.col_range(n, 2 * n);
        // MΩMᵀ = Ω is equivalent to MᵀΩM = Ω for square M.
        let form = crate::f2la::mm(&x, &z.transpose());
        let form = form.add(&form.transpose())?;
        let mut omega = BitMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            omega.set(j, n + j, true);
            omega.set(n + j, j, true);
        }
        if form != omega {
            return Err(Error::Invalid("tableau matrix is not symplectic".into()));
        }
        if phases_of(&self.m, n) != self.p {
            return Err(Error::Invalid("phase vector disagrees with diag(MΛMᵀ)".into()));
        }
        Ok(())
    }

    /// `QPQ†`.
    pub fn conjugate_pauli(&self, pauli: &Pauli) -> Result<Pauli> {
        if pauli.num_qubits() != self.n {
            return Err(Error::Dimension(format!(
                "Pauli on {} qubits, tableau on {}",
                pauli.num_qubits(),
                self.n
            )));
        }
        let coeffs = BitMatrix::from_rows_with_cols(&[pauli.bits()], 2 * self.n)?;
        let pr = row_products(&self.m, &self.p, &self.s, &coeffs, Regime::Sequential);
        let (a2, b2) = (pr.alpha.get(0), pr.beta.get(0));
        let bits = pr.bits.row(0);
        Ok(Pauli {
            alpha: pauli.alpha ^ a2,
            beta: pauli.beta ^ b2 ^ (pauli.alpha & a2),
            x: bits.slice(0, self.n),
            z: bits.slice(self.n, 2 * self.n),
        })
    }

    /// Conjugates each row `(a|b)` of `rows`, read as `X^a Z^b`.
    pub fn conjugate_many(&self, rows: &BitMatrix) -> Result<(BitMatrix, BitVector, BitVector)> {
        self.conjugate_many_with(rows, Regime::Auto)
    }

    pub fn conjugate_many_with(&self, rows: &BitMatrix, regime: Regime) -> Result<(BitMatrix, BitVector, BitVector)> {
        if rows.cols() != 2 * self.n {
            return Err(Error::Dimension(format!(
                "rows have width {}, expected {}",
                rows.cols(),
                2 * self.n
            )));
        }
        let pr = row_products(&self.m, &self.p, &self.s, rows, regime);
        Ok((pr.bits, pr.alpha, pr.beta))
    }

    /// Inverse unitary.
    pub fn inverse(&self) -> Tableau {
        let n = self.n;
        // M⁻¹ = Ω Mᵀ Ω for symplectic M.
        let mt = self.m.transpose();
        let mut minv = BitMatrix::zeros(2 * n, 2 * n);
        for r in 0..2 * n {
            let src = (r + n) % (2 * n);
            let row = mt.row(src);
            let swapped = row.slice(n, 2 * n).concat(&row.slice(0, n));
            minv.set_row(r, &swapped);
        }
        let mut inv = Tableau {
            n,
            p: phases_of(&minv, n),
            m: minv,
            s: BitVector::zeros(2 * n),
        };
        let pr = row_products(&inv.m, &inv.p, &inv.s, &self.m, Regime::Auto);
        let mut rhs = self.s.xor(&pr.beta);
        rhs.xor_assign(&self.p.and(&pr.alpha));
        inv.s = inv.m.mul_vec(&rhs).expect("square");
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.m == BitMatrix::identity(2 * self.n) && self.s.is_zero()
    }

    /// Applies CZ on every edge of a symmetric zero-diagonal adjacency matrix.
    pub fn apply_cz_batch(&mut self, adjacency: &BitMatrix) -> Result<()> {
        let n = self.n;
        if adjacency.rows() != n || adjacency.cols() != n {
            return Err(Error::Dimension("adjacency must be n×n".into()));
        }
        if adjacency != &adjacency.transpose() || !adjacency.diag().is_zero() {
            return Err(Error::Invalid("adjacency must be symmetric with zero diagonal".into()));
        }
        if adjacency.is_zero() {
            return Ok(());
        }
        let mut m = BitMatrix::identity(2 * n);
        m.set_block(0, n, adjacency);
        let batch = Tableau {
            n,
            m,
            p: BitVector::zeros(2 * n),
            s: BitVector::zeros(2 * n),
        };
        *self = compose(self, &batch)?;
        Ok(())
    }

    /// Membership of a Hermitian Pauli in the stabilizer group of this state.
    ///
    /// Returns `Some(false)` if `+P` is a stabilizer, `Some(true)` if `-P` is,
    /// and `None` otherwise.
    pub fn stabilizer_sign(&self, pauli: &Pauli) -> Option<bool> {
        let n = self.n;
        let bits = pauli.bits();
        let swapped = bits.slice(n, 2 * n).concat(&bits.slice(0, n));
        // Coefficient on stabilizer j is the symplectic product with destabilizer j.
        let mut coeff = BitVector::zeros(2 * n);
        for j in 0..n {
            if self.m.row(n + j).dot(&swapped) {
                return None;
            }
            if self.m.row(j).dot(&swapped) {
                coeff.set(n + j, true);
            }
        }
        let c = BitMatrix::from_rows_with_cols(&[coeff], 2 * n).ok()?;
        let pr = row_products(&self.m, &self.p, &self.s, &c, Regime::Sequential);
        if pr.bits.row(0) != bits {
            return None;
        }
        let prod = Pauli {
            alpha: pr.alpha.get(0),
            beta: pr.beta.get(0),
            x: pauli.x.clone(),
            z: pauli.z.clone(),
        };
        debug_assert_eq!(prod.alpha, pauli.alpha);
        Some(prod.hermitian_sign() ^ pauli.hermitian_sign())
    }

    /// Same stabilizer group, signs included.
    pub fn same_state(&self, other: &Tableau) -> bool {
        self.n == other.n
            && (0..self.n).all(|q| {
                let g = self.stabilizer(q);
                other.stabilizer_sign(&g) == Some(false)
            })
    }

    /// Inserts fresh qubits in state `|bits⟩` at the given sorted positions.
    pub fn insert_basis_qubits(&self, positions: &[usize], bits: &BitVector) -> Tableau {
        let k = positions.len();
        let n2 = self.n + k;
        let mut map = Vec::with_capacity(self.n);
        let mut is_new = vec![false; n2];
        for &p in positions {
            is_new[p] = true;
        }
        for q in 0..n2 {
            if !is_new[q] {
                map.push(q);
            }
        }
        let mut out = Tableau::identity(n2);
        for j in 0..2 * self.n {
            let (kind, q) = (j / self.n, j % self.n);
            let dst = kind * n2 + map[q];
            let row = self.m.row(j);
            let mut nr = BitVector::zeros(2 * n2);
            for c in row.ones_iter() {
                let (ck, cq) = (c / self.n, c % self.n);
                nr.set(ck * n2 + map[cq], true);
            }
            out.m.set_row(dst, &nr);
            out.p.set(dst, self.p.get(j));
            out.s.set(dst, self.s.get(j));
        }
        for (i, &pos) in positions.iter().enumerate() {
            out.s.set(n2 + pos, bits.get(i));
        }
        out
    }
}

/// `diag(M Λ Mᵀ)`, i.e. `a_j · b_j` per row.
pub(crate) fn phases_of(m: &BitMatrix, n: usize) -> BitVector {
    let x = m.col_range(0, n);
    let z = m.col_range(n, 2 * n);
    let mut p = BitVector::zeros(m.rows());
    for j in 0..m.rows() {
        if crate::f2la::dot_words(x.row_words(j), z.row_words(j)) {
            p.set(j, true);
        }
    }
    p
}

/// Tableau of `Q₂Q₁` where `t1` describes `Q₁` and `t2` describes `Q₂`.
pub fn compose(t1: &Tableau, t2: &Tableau) -> Result<Tableau> {
    if t1.n != t2.n {
        return Err(Error::Dimension(format!(
            "cannot compose tableaux on {} and {} qubits",
            t1.n, t2.n
        )));
    }
    let pr = row_products(&t2.m, &t2.p, &t2.s, &t1.m, Regime::Auto);
    let mut s = t1.s.xor(&pr.beta);
    s.xor_assign(&t1.p.and(&pr.alpha));
    let p = t1.p.xor(&pr.alpha);
    Ok(Tableau { n: t1.n, m: pr.bits, p, s })
}

/// Composes `t2`, acting on the listed qubits of `t1`, after `t1`.
///
/// Only the columns of `t1` belonging to those qubits take part in the
/// products, so the cost scales with `qubits.len()` rather than `n`.
pub fn compose_on(t1: &Tableau, t2: &Tableau, qubits: &[usize]) -> Result<Tableau> {
    let n = t1.n;
    let k = t2.n;
    if qubits.len() != k {
        return Err(Error::Dimension("qubit list must match the small tableau".into()));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::IndexOutOfRange { index: q, size: n });
    }
    let cols: Vec<usize> = qubits.iter().copied().chain(qubits.iter().map(|&q| n + q)).collect();
    let local = t1.m.select_cols(&cols);
    let pr = row_products(&t2.m, &t2.p, &t2.s, &local, Regime::Auto);
    let mut out = t1.clone();
    for j in 0..2 * n {
        for (c, &col) in cols.iter().enumerate() {
            out.m.set(j, col, pr.bits.get(j, c));
        }
    }
    let mut s = t1.s.xor(&pr.beta);
    s.xor_assign(&t1.p.and(&pr.alpha));
    out.s = s;
    out.p = t1.p.xor(&pr.alpha);
    Ok(out)
}

/// Tensor product, with the qubits of `t1` first.
pub fn tensor(t1: &Tableau, t2: &Tableau) -> Tableau {
    let (a, b) = (t1.n, t2.n);
    let n = a + b;
    let mut m = BitMatrix::zeros(2 * n, 2 * n);
    let mut p = BitVector::zeros(2 * n);
    let mut s = BitVector::zeros(2 * n);
    let place = |t: &Tableau, off: usize, m: &mut BitMatrix, p: &mut BitVector, s: &mut BitVector| {
        let k = t.n;
        for j in 0..2 * k {
            let (kind, q) = (j / k, j % k);
            let dst = kind * n + off + q;
            for c in t.m.row(j).ones_iter() {
                let (ck, cq) = (c / k, c % k);
                m.set(dst, ck * n + off + cq, true);
            }
            p.set(dst, t.p.get(j));
            s.set(dst, t.s.get(j));
        }
    };
    place(t1, 0, &mut m, &mut p, &mut s);
    place(t2, a, &mut m, &mut p, &mut s);
    Tableau { n, m, p, s }
}
