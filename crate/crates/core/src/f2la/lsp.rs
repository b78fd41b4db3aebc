//! LSP factorization and the routines built on it.

use super::bits::{xor_words, BitMatrix, BitVector};
use super::{mm, AffineSubspace};
use crate::error::{Error, Result};

/// Factors with `L · S · P = m`.
///
/// `l` is unit lower-triangular (`rows × rows`). `s` is `rows × cols`; its
/// nonzero rows are listed in `pivot_rows`, and the `t`-th of them has its
/// leading one in column `t`, so deleting zero rows leaves an upper-triangular
/// matrix with unit diagonal. The column permutation satisfies
/// `(S·P)[:, perm[j]] = S[:, j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LspFactors {
    pub l: BitMatrix,
    pub s: BitMatrix,
    pub perm: Vec<usize>,
    pub pivot_rows: Vec<usize>,
    pub rank: usize,
}

impl LspFactors {
    /// The permutation as an explicit matrix.
    pub fn p_matrix(&self) -> BitMatrix {
        let n = self.perm.len();
        let mut p = BitMatrix::zeros(n, n);
        for (j, &pj) in self.perm.iter().enumerate() {
            p.set(j, pj, true);
        }
        p
    }

    /// Pivot columns of the input, in pivot-row order.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.perm[..self.rank]
    }

    pub fn recompose(&self) -> BitMatrix {
        mm(&mm(&self.l, &self.s), &self.p_matrix())
    }
}

/// Row-by-row LSP factorization with first-nonzero pivoting.
pub fn lsp_factorize(m: &BitMatrix) -> LspFactors {
    let (rows, cols) = (m.rows(), m.cols());
    let mut l = BitMatrix::identity(rows);
    // Reduced rows in original column order, one per input row.
    let mut s0 = BitMatrix::zeros(rows, cols);
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut v = vec![0u64; m.stride()];
    for i in 0..rows {
        v.copy_from_slice(m.row_words(i));
        for (&pr, &pc) in pivot_rows.iter().zip(&pivot_cols) {
            if (v[pc >> 6] >> (pc & 63)) & 1 == 1 {
                xor_words(&mut v, s0.row_words(pr));
                l.set(i, pr, true);
            }
        }
        if let Some(pc) = first_one_words(&v) {
            s0.row_words_mut(i).copy_from_slice(&v);
            pivot_rows.push(i);
            pivot_cols.push(pc);
        }
    }
    let rank = pivot_rows.len();
    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let mut perm = pivot_cols.clone();
    perm.extend((0..cols).filter(|&c| !is_pivot[c]));
    let s = s0.select_cols(&perm);
    LspFactors {
        l,
        s,
        perm,
        pivot_rows,
        rank,
    }
}

fn first_one_words(w: &[u64]) -> Option<usize> {
    w.iter()
        .enumerate()
        .find(|(_, &x)| x != 0)
        .map(|(i, x)| i * 64 + x.trailing_zeros() as usize)
}

pub fn rank(m: &BitMatrix) -> usize {
    // Transposing first keeps the elimination on the shorter side.
    if m.rows() > m.cols() {
        lsp_factorize(&m.transpose()).rank
    } else {
        lsp_factorize(m).rank
    }
}

/// Inverse of a unit lower-triangular matrix.
pub(crate) fn inv_unit_lower(l: &BitMatrix) -> BitMatrix {
    let n = l.rows();
    let mut x = BitMatrix::identity(n);
    for i in 0..n {
        let row = l.row(i);
        for j in row.ones_iter().filter(|&j| j < i) {
            x.xor_row_into(j, i);
        }
    }
    x
}

/// Inverse of a unit upper-triangular matrix.
pub(crate) fn inv_unit_upper(u: &BitMatrix) -> BitMatrix {
    let n = u.rows();
    let mut x = BitMatrix::identity(n);
    for i in (0..n).rev() {
        let row = u.row(i);
        for j in row.ones_iter().filter(|&j| j > i) {
            x.xor_row_into(j, i);
        }
    }
    x
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(m: &BitMatrix) -> Option<BitMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let mut a = m.clone();
    let mut x = BitMatrix::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&r| a.get(r, c))?;
        a.swap_rows(p, c);
        x.swap_rows(p, c);
        for r in 0..n {
            if r != c && a.get(r, c) {
                a.xor_row_into(c, r);
                x.xor_row_into(c, r);
            }
        }
    }
    Some(x)
}

/// A matrix `Cᵍ` with `C · Cᵍ · C = C`.
pub fn generalized_inverse(c: &BitMatrix) -> BitMatrix {
    if c.rows() > c.cols() {
        return generalized_inverse(&c.transpose()).transpose();
    }
    let f = lsp_factorize(c);
    let r = f.rank;
    // Q·L⁻¹ restricted to the pivot rows.
    let linv = inv_unit_lower(&f.l);
    let ql = linv.select_rows(&f.pivot_rows);
    let u = f.s.select_rows(&f.pivot_rows).select_cols(&(0..r).collect::<Vec<_>>());
    let y = mm(&inv_unit_upper(&u), &ql);
    let mut g = BitMatrix::zeros(c.cols(), c.rows());
    for t in 0..r {
        g.row_words_mut(f.perm[t]).copy_from_slice(y.row_words(t));
    }
    g
}

/// Indices of a maximal independent set of columns, preferring earlier ones.
pub fn column_basis(m: &BitMatrix) -> Vec<usize> {
    lsp_factorize(&m.transpose()).pivot_rows
}

/// The solution set of `C x = d`, or `None` when it is empty.
pub fn solve_linear(c: &BitMatrix, d: &BitVector) -> Result<Option<AffineSubspace>> {
    if c.rows() != d.len() {
        return Err(Error::Dimension(format!(
            "system has {} equations but right-hand side has length {}",
            c.rows(),
            d.len()
        )));
    }
    let g = generalized_inverse(c);
    let f = g.mul_vec(d)?;
    if c.mul_vec(&f)? != *d {
        return Ok(None);
    }
    let n = c.cols();
    let e = mm(&g, c).add(&BitMatrix::identity(n))?;
    let keep = column_basis(&e);
    let basis = e.select_cols(&keep);
    Ok(Some(AffineSubspace::from_independent(basis, f)?))
}
