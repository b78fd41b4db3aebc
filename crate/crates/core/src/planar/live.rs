//! A stabilizer state whose qubits are added and measured away one at a time.
//!
//! Rows hold X and Z words in the letter convention, where the bit
//! pair `(1, 1)` is `Y`, so a row product is a few word operations plus a
//! popcount. Destabilizer signs are never needed for sampling and are not
//! stored. Qubits carry external labels; removing a qubit moves the last
//! column into its place.

use std::collections::HashMap;

use rand::Rng;

use crate::f2la::BitVector;
use crate::tableau::{Basis, Pauli};

const DX: usize = 0;
const DZ: usize = 1;
const SX: usize = 2;
const SZ: usize = 3;

#[derive(Clone, Debug, Default)]
pub struct LiveTableau {
    n: usize,
    /// Words per row; the capacity in qubits is `64 * w`.
    w: usize,
    /// Word `k` of row pair `j` at `j * w + k`, as `[dx, dz, sx, sz]`, so
    /// that a column update touches one cache line per row.
    data: Vec<[u64; 4]>,
    sign: Vec<bool>,
    label: Vec<usize>,
    col: HashMap<usize, usize>,
}

/// `left ← left · right` on the lanes `lo` (X) and `lo + 1` (Z) of `left`
/// and `ro`, `ro + 1` of `right`; returns the power of `i` picked up.
fn mul_words(left: &mut [[u64; 4]], lo: usize, right: &[[u64; 4]], ro: usize) -> u32 {
    let (mut c1, mut c2) = (0u64, 0u64);
    for (l, r) in left.iter_mut().zip(right) {
        let (ox, oz, rx, rz) = (l[lo], l[lo + 1], r[ro], r[ro + 1]);
        let (x, z) = (ox ^ rx, oz ^ rz);
        let xz = ox & rz;
        let anti = (rx & oz) ^ xz;
        c2 ^= (c1 ^ x ^ z ^ xz) & anti;
        c1 ^= anti;
        l[lo] = x;
        l[lo + 1] = z;
    }
    c1.count_ones() + 2 * c2.count_ones()
}

/// Disjoint views of rows `dst` (mutable) and `src`.
fn pair(v: &mut [[u64; 4]], w: usize, dst: usize, src: usize) -> (&mut [[u64; 4]], &[[u64; 4]]) {
    debug_assert_ne!(dst, src);
    if dst < src {
        let (a, b) = v.split_at_mut(src * w);
        (&mut a[dst * w..dst * w + w], &b[..w])
    } else {
        let (a, b) = v.split_at_mut(dst * w);
        (&mut b[..w], &a[src * w..src * w + w])
    }
}

impl LiveTableau {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty state with room for `qubits` qubits before any reallocation.
    pub fn with_capacity(qubits: usize) -> Self {
        let mut t = Self::new();
        t.reserve(qubits);
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Labels in column order.
    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    pub fn contains(&self, label: usize) -> bool {
        self.col.contains_key(&label)
    }

    fn column(&self, label: usize) -> usize {
        *self.col.get(&label).unwrap_or_else(|| panic!("qubit {label} is not live"))
    }

    fn row(&self, j: usize) -> &[[u64; 4]] {
        &self.data[j * self.w..(j + 1) * self.w]
    }

    fn reserve(&mut self, qubits: usize) {
        if qubits <= 64 * self.w {
            return;
        }
        let mut w = self.w.max(1);
        while 64 * w < qubits {
            w *= 2;
        }
        let old = self.w;
        let mut grown = vec![[0u64; 4]; 64 * w * w];
        for j in 0..self.n {
            grown[j * w..j * w + old].copy_from_slice(&self.data[j * old..j * old + old]);
        }
        self.data = grown;
        self.w = w;
    }

    /// Adds a qubit in `|+⟩`.
    pub fn add_plus(&mut self, label: usize) {
        assert!(!self.col.contains_key(&label), "qubit {label} is already live");
        self.reserve(self.n + 1);
        let (c, w) = (self.n, self.w);
        let (k, b) = (c / 64, 1u64 << (c % 64));
        self.data[c * w + k][DZ] |= b;
        self.data[c * w + k][SX] |= b;
        self.sign.push(false);
        self.label.push(label);
        self.col.insert(label, c);
        self.n += 1;
    }

    /// Applies `f(x, z, bit)` to column `c` of every row; a nonzero return
    /// flips the stabilizer sign.
    fn for_column(&mut self, c: usize, f: impl Fn(&mut u64, &mut u64, u64) -> u64) {
        let (w, k, b) = (self.w, c / 64, 1u64 << (c % 64));
        for j in 0..self.n {
            let [dx, dz, sx, sz] = &mut self.data[j * w + k];
            f(dx, dz, b);
            if f(sx, sz, b) != 0 {
                self.sign[j] ^= true;
            }
        }
    }

    pub fn h(&mut self, label: usize) {
        let c = self.column(label);
        self.for_column(c, |x, z, b| {
            let (xb, zb) = (*x & b, *z & b);
            *x = (*x & !b) | zb;
            *z = (*z & !b) | xb;
            xb & zb
        });
    }

    pub fn s(&mut self, label: usize) {
        let c = self.column(label);
        self.for_column(c, |x, z, b| {
            let flip = *x & *z & b;
            *z ^= *x & b;
            flip
        });
    }

    pub fn sdg(&mut self, label: usize) {
        let c = self.column(label);
        self.for_column(c, |x, z, b| {
            let flip = *x & !*z & b;
            *z ^= *x & b;
            flip
        });
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let (ca, cb) = (self.column(a), self.column(b));
        let w = self.w;
        let (ka, ba, kb, bb) = (ca / 64, ca % 64, cb / 64, cb % 64);
        for j in 0..self.n {
            for lane in [DX, SX] {
                let xa = (self.data[j * w + ka][lane] >> ba) & 1;
                let xb = (self.data[j * w + kb][lane] >> bb) & 1;
                if xa | xb == 0 {
                    continue;
                }
                let za = (self.data[j * w + ka][lane + 1] >> ba) & 1;
                let zb = (self.data[j * w + kb][lane + 1] >> bb) & 1;
                self.data[j * w + ka][lane + 1] ^= xb << ba;
                self.data[j * w + kb][lane + 1] ^= xa << bb;
                if lane == SX && xa & xb & (za ^ zb) == 1 {
                    self.sign[j] ^= true;
                }
            }
        }
    }

    /// Rotates `basis` onto Z, matching [`Basis::change_gates`].
    pub fn rotate_to_z(&mut self, label: usize, basis: Basis) {
        match basis {
            Basis::X => self.h(label),
            Basis::Y => {
                self.sdg(label);
                self.h(label);
            }
            Basis::Z => {}
        }
    }

    /// `stab_dst ← stab_dst · stab_src`, signs included.
    fn stab_mul(&mut self, dst: usize, src: usize) {
        let (l, r) = pair(&mut self.data, self.w, dst, src);
        let log_i = mul_words(l, SX, r, SX);
        debug_assert_eq!(log_i % 2, 0, "stabilizers commute");
        self.sign[dst] ^= self.sign[src] ^ (log_i & 2 != 0);
    }

    /// Measures qubit `label` in Z and removes it.
    pub fn measure<R: Rng + ?Sized>(&mut self, label: usize, rng: &mut R) -> bool {
        let c = self.column(label);
        let (n, w, k, b) = (self.n, self.w, c / 64, 1u64 << (c % 64));
        let (j0, outcome) = match (0..n).find(|&j| self.data[j * w + k][SX] & b != 0) {
            Some(p) => {
                for j in 0..n {
                    if j == p {
                        continue;
                    }
                    let word = self.data[j * w + k];
                    if word[SX] & b != 0 {
                        self.stab_mul(j, p);
                    }
                    if word[DX] & b != 0 {
                        let (l, r) = pair(&mut self.data, w, j, p);
                        mul_words(l, DX, r, SX);
                    }
                }
                for q in &mut self.data[p * w..p * w + w] {
                    *q = [q[SX], q[SZ], 0, 0];
                }
                self.data[p * w + k][SZ] = b;
                let outcome = rng.gen::<bool>();
                self.sign[p] = outcome;
                (p, outcome)
            }
            None => {
                let hits: Vec<usize> = (0..n).filter(|&j| self.data[j * w + k][DX] & b != 0).collect();
                let j0 = hits[0];
                for &j in &hits[1..] {
                    self.stab_mul(j0, j);
                    let (l, r) = pair(&mut self.data, w, j, j0);
                    mul_words(l, DX, r, DX);
                }
                (j0, self.sign[j0])
            }
        };
        debug_assert!(self.row(j0).iter().all(|q| q[SX] == 0));
        // the other rows commute with Z_c, so only Z bits remain in column c
        for j in 0..n {
            if j != j0 {
                let q = &mut self.data[j * w + k];
                if q[SZ] & b != 0 {
                    q[SZ] ^= b;
                    self.sign[j] ^= outcome;
                }
                q[DZ] &= !b;
            }
        }
        self.remove(j0, c);
        outcome
    }

    /// Drops row pair `j0` and column `c`, which must be clear in every
    /// other row.
    fn remove(&mut self, j0: usize, c: usize) {
        let (w, last) = (self.w, self.n - 1);
        if j0 != last {
            self.data.copy_within(last * w..last * w + w, j0 * w);
        }
        self.data[last * w..last * w + w].fill([0; 4]);
        self.sign.swap_remove(j0);
        if c != last {
            let (kc, bc, kl, bl) = (c / 64, c % 64, last / 64, last % 64);
            for j in 0..last {
                let moved = self.data[j * w + kl];
                for lane in 0..4 {
                    let bit = (moved[lane] >> bl) & 1;
                    self.data[j * w + kl][lane] &= !(1u64 << bl);
                    self.data[j * w + kc][lane] |= bit << bc;
                }
            }
        }
        let gone = self.label.swap_remove(c);
        self.col.remove(&gone);
        if c != last {
            self.col.insert(self.label[c], c);
        }
        self.n -= 1;
    }

    /// Appends the qubits of `other` after those of `self`.
    pub fn absorb(&mut self, other: LiveTableau) {
        let off = self.n;
        self.reserve(off + other.n);
        let (w, wo) = (self.w, other.w);
        let (sh, k0) = (off % 64, off / 64);
        for j in 0..other.n {
            let row = &mut self.data[(off + j) * w..(off + j + 1) * w];
            for (i, quad) in other.data[j * wo..(j + 1) * wo].iter().enumerate() {
                for lane in 0..4 {
                    let word = quad[lane];
                    if word == 0 {
                        continue;
                    }
                    row[k0 + i][lane] |= word << sh;
                    if sh != 0 && k0 + i + 1 < w {
                        row[k0 + i + 1][lane] |= word >> (64 - sh);
                    }
                }
            }
        }
        self.sign.extend_from_slice(&other.sign);
        for &l in &other.label {
            assert!(self.col.insert(l, self.label.len()).is_none(), "qubit {l} is live on both sides");
            self.label.push(l);
        }
        self.n += other.n;
    }

    /// Stabilizer generator `j` over the live qubits in column order.
    pub fn stabilizer(&self, j: usize) -> Pauli {
        let row = self.row(j);
        let bits = |lane: usize| {
            let mut out = BitVector::zeros(self.n);
            for c in 0..self.n {
                out.set(c, (row[c / 64][lane] >> (c % 64)) & 1 == 1);
            }
            out
        };
        Pauli::hermitian(bits(SX), bits(SZ), self.sign[j])
    }
}
