//! `Ax = b` over GF(2) for symmetric `A` with zero diagonal.
//!
//! Read `A` as the adjacency matrix of a graph `G`. Stabilizers of the
//! gadget-circuit state that carry no X on merge ancillas restrict to
//! stabilizers `X^x Z^{Ax}` of `|G⟩`, so sampling one with Z-part `b` on the
//! data qubits gives a uniformly random solution.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVector};
use crate::gss::{build_circuit, correct_general, nice_td, Pattern};
use crate::tableau::Basis;
use crate::treedecomp::{compute_td, is_planar, Graph, TreeDecomposition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSystem {
    pub a: BitMatrix,
    pub b: BitVector,
}

impl SymmetricSystem {
    pub fn new(a: BitMatrix, b: BitVector) -> Result<Self> {
        if a.rows() != a.cols() || b.len() != a.rows() {
            return Err(Error::Dimension(format!("A is {}×{}, b has length {}", a.rows(), a.cols(), b.len())));
        }
        if a != a.transpose() || !a.diag().is_zero() {
            return Err(Error::Invalid("A must be symmetric with zero diagonal".into()));
        }
        Ok(Self { a, b })
    }

    /// Matrix in the f2la text format plus a line of `n` bits.
    pub fn parse(matrix: &str, rhs: &str) -> Result<Self> {
        Self::new(BitMatrix::parse_text(matrix)?, BitVector::parse01(rhs)?)
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn graph(&self) -> Graph {
        Graph::from_adjacency(&self.a).expect("checked on construction")
    }

    pub fn is_solution(&self, x: &BitVector) -> bool {
        x.len() == self.n() && self.a.mul_vec(x).map_or(false, |ax| ax == self.b)
    }
}

/// A uniformly random solution, or `None` when there is none. Without a
/// decomposition the single-bag one is used.
pub fn solve_symmetric_f2(
    sys: &SymmetricSystem,
    td: Option<&TreeDecomposition>,
    rng: &mut dyn RngCore,
) -> Result<Option<BitVector>> {
    let n = sys.n();
    if n == 0 {
        return Ok(Some(BitVector::zeros(0)));
    }
    let g = sys.graph();
    let c = build_circuit(&g, &nice_td(n, td)?)?;
    let nt = c.n_total();
    let mut pattern = Pattern::free(nt);
    for v in 0..n {
        pattern.z_part[v] = Some(sys.b.get(v));
    }
    for q in n..nt {
        pattern.x_part[q] = Some(false);
    }
    let found = correct_general(&c, &vec![Basis::Z; n], &pattern, rng)?;
    Ok(found.map(|p| p.x.slice(0, n)))
}

/// [`solve_symmetric_f2`] with a separator decomposition of the graph of `A`.
pub fn solve_planar_f2(sys: &SymmetricSystem, rng: &mut dyn RngCore) -> Result<Option<BitVector>> {
    let g = sys.graph();
    if !is_planar(&g) {
        return Err(Error::NotPlanar);
    }
    let td = compute_td(&g, &[])?;
    solve_symmetric_f2(sys, Some(&td), rng)
}
