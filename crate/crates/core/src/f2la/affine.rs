use rand::Rng;

use super::bits::{BitMatrix, BitVector};
use super::lsp::{column_basis, rank, solve_linear};
use super::mm;
use crate::error::{Error, Result};

/// The set `{E z + f}` for a matrix `E` with independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    basis: BitMatrix,
    offset: BitVector,
}

impl AffineSubspace {
    /// Wraps a basis already known to have independent columns.
    pub fn from_independent(basis: BitMatrix, offset: BitVector) -> Result<Self> {
        if basis.rows() != offset.len() {
            return Err(Error::Dimension(format!(
                "basis has {} rows but offset has length {}",
                basis.rows(),
                offset.len()
            )));
        }
        debug_assert_eq!(rank(&basis), basis.cols(), "basis columns must be independent");
        Ok(Self { basis, offset })
    }

    /// Builds a subspace from any spanning set, dropping dependent columns.
    pub fn from_spanning(gens: &BitMatrix, offset: BitVector) -> Result<Self> {
        let keep = column_basis(gens);
        Self::from_independent(gens.select_cols(&keep), offset)
    }

    pub fn point(offset: BitVector) -> Self {
        Self {
            basis: BitMatrix::zeros(offset.len(), 0),
            offset,
        }
    }

    /// All of `F₂ⁿ`.
    pub fn full(n: usize) -> Self {
        Self {
            basis: BitMatrix::identity(n),
            offset: BitVector::zeros(n),
        }
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn offset(&self) -> &BitVector {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let diff = v.xor(&self.offset);
        if diff.is_zero() {
            return true;
        }
        let aug = self
            .basis
            .hstack(&BitMatrix::from_cols(&[diff], v.len()).expect("column length"))
            .expect("row counts agree");
        rank(&aug) == self.dim()
    }

    /// Element for coefficient vector `c`.
    pub fn element(&self, c: &BitVector) -> BitVector {
        let mut v = self.basis.mul_vec(c).expect("coefficient length");
        v.xor_assign(&self.offset);
        v
    }

    /// Uniform element, from a uniform coefficient vector.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        self.element(&BitVector::random(self.dim(), rng))
    }

    /// Every element; intended for small dimensions.
    pub fn elements(&self) -> Vec<BitVector> {
        assert!(self.dim() <= 24, "refusing to enumerate 2^{} elements", self.dim());
        (0u64..1 << self.dim())
            .map(|mask| {
                let c = BitVector::from_words(self.dim(), vec![mask; if self.dim() == 0 { 0 } else { 1 }]);
                self.element(&c)
            })
            .collect()
    }

    /// Set equality.
    pub fn set_eq(&self, other: &AffineSubspace) -> bool {
        if self.ambient_dim() != other.ambient_dim() || self.dim() != other.dim() {
            return false;
        }
        let both = self.basis.hstack(&other.basis).expect("row counts agree");
        rank(&both) == self.dim() && self.contains(&other.offset)
    }

    /// `{ (x, y) : x ∈ self, y ∈ other }`.
    pub fn direct_sum(&self, other: &AffineSubspace) -> AffineSubspace {
        AffineSubspace {
            basis: self.basis.direct_sum(&other.basis),
            offset: self.offset.concat(&other.offset),
        }
    }

    /// Image under `v ↦ M v`.
    pub fn map_linear(&self, m: &BitMatrix) -> Result<AffineSubspace> {
        if m.cols() != self.ambient_dim() {
            return Err(Error::Dimension("map width does not match ambient dimension".into()));
        }
        let offset = m.mul_vec(&self.offset)?;
        Self::from_spanning(&mm(m, &self.basis), offset)
    }

    /// Elements whose coordinates `idx` equal `values`; `None` if there are none.
    pub fn enforce(&self, idx: &[usize], values: &BitVector) -> Result<Option<AffineSubspace>> {
        if idx.len() != values.len() {
            return Err(Error::Dimension("constraint count mismatch".into()));
        }
        if idx.is_empty() {
            return Ok(Some(self.clone()));
        }
        let e = self.basis.select_rows(idx);
        let rhs = values.xor(&self.offset.select(idx));
        let Some(coef) = solve_linear(&e, &rhs)? else {
            return Ok(None);
        };
        let offset = self.element(coef.offset());
        let basis = mm(&self.basis, coef.basis());
        Ok(Some(AffineSubspace::from_independent(basis, offset)?))
    }

    /// Projection onto the coordinates `idx`, in list order.
    pub fn restrict(&self, idx: &[usize]) -> AffineSubspace {
        Self::from_spanning(&self.basis.select_rows(idx), self.offset.select(idx))
            .expect("selected shapes agree")
    }
}
