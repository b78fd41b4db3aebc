//! Ordered products of tableau rows, the workhorse behind conjugation and
//! composition.
//!
//! Given rows `r_j = i^{p_j} (-1)^{s_j} X^{a_j} Z^{b_j}` and a coefficient row
//! `c`, the ordered product `prod_j r_j^{c_j}` has bits `c · M`, phase
//! `alpha = c · p` and sign
//! `beta = c · s + C(w, 2) + c · lower(X Zᵀ) · cᵀ` where `w` counts the
//! selected rows with `p_j = 1`.

use crate::f2la::{dot_words, mm, xor_words, BitMatrix, BitVector};

/// Strategy for evaluating a batch of row products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// One running product per coefficient row.
    Sequential,
    /// Restrict to the rows actually used and form one small Gram block.
    NarrowBlock,
    /// Split the index range in halves and recurse, joining halves by one product.
    RecursiveHalving,
    /// Pick the cheapest of the above from a cost estimate.
    Auto,
}

pub(crate) struct Products {
    pub bits: BitMatrix,
    pub alpha: BitVector,
    pub beta: BitVector,
}

/// Products of `src` rows selected by each row of `coeffs`.
pub(crate) fn row_products(
    src: &BitMatrix,
    p: &BitVector,
    s: &BitVector,
    coeffs: &BitMatrix,
    regime: Regime,
) -> Products {
    assert_eq!(coeffs.cols(), src.rows(), "coefficient width must equal row count");
    assert_eq!(src.cols() % 2, 0);
    let regime = match regime {
        Regime::Auto => choose(src, coeffs),
        r => r,
    };
    let n = src.cols() / 2;
    match regime {
        Regime::Sequential => sequential(src, p, s, coeffs, n),
        Regime::NarrowBlock => {
            let (bits, alpha, mut beta) = linear_part(src, p, s, coeffs);
            let used = used_rows(coeffs);
            let c = coeffs.select_cols(&used);
            let sub = src.select_rows(&used);
            let x = sub.col_range(0, n);
            let z = sub.col_range(n, 2 * n);
            let corr = block_term(&c, &x, &z);
            beta.xor_assign(&corr);
            Products { bits, alpha, beta }
        }
        Regime::RecursiveHalving => {
            let (bits, alpha, mut beta) = linear_part(src, p, s, coeffs);
            let x = src.col_range(0, n);
            let z = src.col_range(n, 2 * n);
            let leaf = coeffs.rows().max(64);
            let corr = halving(coeffs, &x, &z, 0, src.rows(), leaf);
            beta.xor_assign(&corr);
            Products { bits, alpha, beta }
        }
        Regime::Auto => unreachable!(),
    }
}

fn choose(src: &BitMatrix, coeffs: &BitMatrix) -> Regime {
    let m = coeffs.rows() as f64;
    let k = src.rows() as f64;
    let w = (src.cols() as f64 / 64.0).max(1.0);
    let nnz: usize = (0..coeffs.rows()).map(|r| coeffs.row(r).count_ones()).sum();
    let used = used_rows(coeffs).len() as f64;
    let seq = nnz as f64 * 1.5 * w;
    let block = used * used * w / 2.0 + m * used * w / 64.0 + used * w;
    let levels = (k / m.max(64.0)).log2().max(0.0) + 1.0;
    let rec = m * k * w * levels / 64.0 * 2.0 + m * m.max(64.0) * w;
    if seq <= block && seq <= rec {
        Regime::Sequential
    } else if block <= rec {
        Regime::NarrowBlock
    } else {
        Regime::RecursiveHalving
    }
}

fn used_rows(coeffs: &BitMatrix) -> Vec<usize> {
    let mut any = BitVector::zeros(coeffs.cols());
    for r in 0..coeffs.rows() {
        for (a, w) in any.words_mut().iter_mut().zip(coeffs.row_words(r)) {
            *a |= *w;
        }
    }
    any.ones_iter().collect()
}

fn sequential(src: &BitMatrix, p: &BitVector, s: &BitVector, coeffs: &BitMatrix, n: usize) -> Products {
    let x = src.col_range(0, n);
    let z = src.col_range(n, 2 * n);
    let m = coeffs.rows();
    let mut bits = BitMatrix::zeros(m, src.cols());
    let mut alpha = BitVector::zeros(m);
    let mut beta = BitVector::zeros(m);
    let mut accz = vec![0u64; z.stride()];
    for i in 0..m {
        accz.fill(0);
        let mut w = 0usize;
        let mut b = false;
        let out = bits.row_words_mut(i);
        for j in coeffs.row(i).ones_iter() {
            b ^= s.get(j);
            if p.get(j) {
                w += 1;
            }
            b ^= dot_words(&accz, x.row_words(j));
            xor_words(&mut accz, z.row_words(j));
            xor_words(out, src.row_words(j));
        }
        alpha.set(i, w & 1 == 1);
        beta.set(i, b ^ ((w >> 1) & 1 == 1));
    }
    Products { bits, alpha, beta }
}

/// `c · M`, `c · p` and `c · s + C(w, 2)`.
fn linear_part(
    src: &BitMatrix,
    p: &BitVector,
    s: &BitVector,
    coeffs: &BitMatrix,
) -> (BitMatrix, BitVector, BitVector) {
    let bits = mm(coeffs, src);
    let m = coeffs.rows();
    let mut alpha = BitVector::zeros(m);
    let mut beta = BitVector::zeros(m);
    for i in 0..m {
        let row = coeffs.row(i);
        let w = row.and(p).count_ones();
        alpha.set(i, w & 1 == 1);
        beta.set(i, row.dot(s) ^ ((w >> 1) & 1 == 1));
    }
    (bits, alpha, beta)
}

/// `diag(C · lower(X Zᵀ) · Cᵀ)` formed directly.
fn block_term(c: &BitMatrix, x: &BitMatrix, z: &BitMatrix) -> BitVector {
    let gram = mm(x, &z.transpose()).lower();
    let v = mm(c, &gram.transpose());
    rowdots(c, &v)
}

fn rowdots(a: &BitMatrix, b: &BitMatrix) -> BitVector {
    let mut out = BitVector::zeros(a.rows());
    for i in 0..a.rows() {
        if dot_words(a.row_words(i), b.row_words(i)) {
            out.set(i, true);
        }
    }
    out
}

/// Same quantity as [`block_term`] over rows `lo..hi`, by halving.
fn halving(c: &BitMatrix, x: &BitMatrix, z: &BitMatrix, lo: usize, hi: usize, leaf: usize) -> BitVector {
    if hi - lo <= leaf {
        let idx: Vec<usize> = (lo..hi).collect();
        return block_term(&c.select_cols(&idx), &x.select_rows(&idx), &z.select_rows(&idx));
    }
    let mid = (lo + hi) / 2;
    let mut out = halving(c, x, z, lo, mid, leaf);
    out.xor_assign(&halving(c, x, z, mid, hi, leaf));
    let i1: Vec<usize> = (lo..mid).collect();
    let i2: Vec<usize> = (mid..hi).collect();
    let zsum = mm(&c.select_cols(&i1), &z.select_rows(&i1));
    let xsum = mm(&c.select_cols(&i2), &x.select_rows(&i2));
    out.xor_assign(&rowdots(&zsum, &xsum));
    out
}
