//! Planar front ends: the end-to-end planar sampler, sampling through a
//! coarse-graining onto a planar graph, the grid samplers and the GF(2)
//! solver for symmetric systems.

mod grid;
mod linear;
mod live;

pub use grid::{grid_naive, grid_recursive, grid_run, grid_sweep, GridAlgo, GridRun, GridSpec, GRID_BASE};
pub use linear::{solve_planar_f2, solve_symmetric_f2, SymmetricSystem};
pub use live::LiveTableau;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::f2la::BitVector;
use crate::gss::{GssInstance, GssSolver, ZeroProbability};
use crate::treedecomp::{compute_td, is_planar, preimage, CoarseGraining, Graph};

/// Solver for a planar instance, compiled against a separator decomposition.
pub fn planar_solver(inst: GssInstance) -> Result<GssSolver> {
    if !is_planar(&inst.graph) {
        return Err(Error::NotPlanar);
    }
    let td = compute_td(&inst.graph, &[])?;
    GssSolver::new(inst, Some(&td))
}

/// One sample from a planar instance.
pub fn simulate_planar(
    inst: &GssInstance,
    rng: &mut dyn RngCore,
) -> Result<std::result::Result<BitVector, ZeroProbability>> {
    planar_solver(inst.clone())?.sample(rng)
}

/// Solver for an instance whose graph coarse-grains onto `target`: a
/// decomposition of `target` is pulled back through `cg`.
pub fn coarse_solver(inst: GssInstance, cg: &CoarseGraining, target: &Graph) -> Result<GssSolver> {
    // re-check the map against these two graphs
    CoarseGraining::new(&inst.graph, target, cg.map().to_vec())?;
    if !is_planar(target) {
        return Err(Error::NotPlanar);
    }
    let td = preimage(&compute_td(target, &[])?, cg)?;
    GssSolver::new(inst, Some(&td))
}

/// One sample through a coarse-graining onto a planar graph.
pub fn simulate_coarse(
    inst: &GssInstance,
    cg: &CoarseGraining,
    target: &Graph,
    rng: &mut dyn RngCore,
) -> Result<std::result::Result<BitVector, ZeroProbability>> {
    coarse_solver(inst.clone(), cg, target)?.sample(rng)
}
