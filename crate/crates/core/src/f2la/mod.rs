//! Dense linear algebra over GF(2).
//!
//! Vectors and matrices are packed 64 bits per word in row-major order. On
//! top of that sit matrix multiplication, LSP factorization, generalized
//! inverses, affine solution spaces and uniform sampling from them.

mod affine;
mod bits;
mod lsp;

use std::sync::atomic::{AtomicU8, Ordering};

pub use affine::AffineSubspace;
pub use bits::{BitMatrix, BitVector};
pub(crate) use bits::{dot_words, xor_words};
pub use lsp::{column_basis, generalized_inverse, invert, lsp_factorize, rank, solve_linear, LspFactors};
pub(crate) use lsp::{inv_unit_lower, inv_unit_upper};

use crate::error::{Error, Result};

/// Kernel used by [`mat_mul`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulKernel {
    /// Row-XOR cubic product, blocked over the inner dimension.
    Cubic,
    /// Method of Four Russians with 8-bit lookup tables.
    FourRussians,
}

static KERNEL: AtomicU8 = AtomicU8::new(0);

/// Selects the process-wide multiplication kernel.
pub fn set_mul_kernel(k: MulKernel) {
    KERNEL.store(
        match k {
            MulKernel::Cubic => 0,
            MulKernel::FourRussians => 1,
        },
        Ordering::Relaxed,
    );
}

pub fn mul_kernel() -> MulKernel {
    match KERNEL.load(Ordering::Relaxed) {
        1 => MulKernel::FourRussians,
        _ => MulKernel::Cubic,
    }
}

/// Exact product `a · b` using the configured kernel.
pub fn mat_mul(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    mat_mul_with(a, b, mul_kernel())
}

pub fn mat_mul_with(a: &BitMatrix, b: &BitMatrix, kernel: MulKernel) -> Result<BitMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(match kernel {
        MulKernel::Cubic => mul_cubic(a, b),
        MulKernel::FourRussians => mul_m4r(a, b),
    })
}

/// Panicking shorthand for internal callers whose shapes are known to agree.
pub(crate) fn mm(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    mat_mul(a, b).expect("internal product with conformable shapes")
}

const BLOCK_K: usize = 256;

fn mul_cubic(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    let mut c = BitMatrix::zeros(a.rows(), b.cols());
    let kdim = a.cols();
    let mut k0 = 0;
    while k0 < kdim {
        let k1 = (k0 + BLOCK_K).min(kdim);
        for i in 0..a.rows() {
            let arow = a.row_words(i);
            let (w0, w1) = (k0 >> 6, (k1 + 63) >> 6);
            for wi in w0..w1 {
                let mut w = arow[wi];
                if w == 0 {
                    continue;
                }
                // keep only bits inside [k0, k1)
                let base = wi * 64;
                if base < k0 {
                    w &= u64::MAX << (k0 - base);
                }
                if base + 64 > k1 {
                    let keep = k1 - base;
                    if keep < 64 {
                        w &= (1u64 << keep) - 1;
                    }
                }
                while w != 0 {
                    let k = base + w.trailing_zeros() as usize;
                    w &= w - 1;
                    xor_words(c.row_words_mut(i), b.row_words(k));
                }
            }
        }
        k0 = k1;
    }
    c
}

fn mul_m4r(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    const T: usize = 8;
    let mut c = BitMatrix::zeros(a.rows(), b.cols());
    let stride = b.stride();
    let mut table = vec![0u64; (1 << T) * stride];
    let mut k0 = 0;
    while k0 < a.cols() {
        let t = T.min(a.cols() - k0);
        // table[mask] = sum of rows k0+j for bits j of mask, built by Gray-free doubling
        table[..stride].fill(0);
        for j in 0..t {
            let half = 1usize << j;
            let (lo, hi) = table.split_at_mut(half * stride);
            let src = b.row_words(k0 + j);
            for m in 0..half {
                let dst = &mut hi[m * stride..(m + 1) * stride];
                dst.copy_from_slice(&lo[m * stride..(m + 1) * stride]);
                xor_words(dst, src);
            }
        }
        for i in 0..a.rows() {
            let aw = a.row_words(i);
            let (wi, off) = (k0 >> 6, k0 & 63);
            let mut bitsv = aw[wi] >> off;
            if off + t > 64 {
                bitsv |= aw[wi + 1] << (64 - off);
            }
            let mask = (bitsv & ((1u64 << t) - 1)) as usize;
            if mask != 0 {
                xor_words(c.row_words_mut(i), &table[mask * stride..(mask + 1) * stride]);
            }
        }
        k0 += t;
    }
    c
}
