//! Three samplers for graph states on the `ℓ × ℓ` grid.
//!
//! All of them run on [`LiveTableau`] and differ only in the order in which
//! qubits are created, entangled and measured. A qubit is measured once all
//! of its CZ gates have been applied, so the three orders give the same
//! outcome distribution.

use std::str::FromStr;

use rand::Rng;

use super::live::LiveTableau;
use crate::error::{Error, Result};
use crate::f2la::BitVector;
use crate::tableau::Basis;
use crate::treedecomp::Graph;

/// Regions with both sides at most this long are solved directly.
pub const GRID_BASE: usize = 4;

/// A square grid with one measurement basis per cell, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub side: usize,
    pub bases: Vec<Basis>,
}

impl GridSpec {
    pub fn new(side: usize, bases: Vec<Basis>) -> Result<Self> {
        if bases.len() != side * side {
            return Err(Error::Dimension(format!("{} bases for a {side}×{side} grid", bases.len())));
        }
        Ok(Self { side, bases })
    }

    pub fn uniform(side: usize, basis: Basis) -> Self {
        Self { side, bases: vec![basis; side * side] }
    }

    /// Each cell measured in X or Y with equal probability.
    pub fn random_xy<R: Rng + ?Sized>(side: usize, rng: &mut R) -> Self {
        let bases = (0..side * side).map(|_| if rng.gen() { Basis::X } else { Basis::Y }).collect();
        Self { side, bases }
    }

    pub fn num_cells(&self) -> usize {
        self.side * self.side
    }

    pub fn graph(&self) -> Graph {
        Graph::grid(self.side, self.side)
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let l = self.side;
        let (r, c) = (v / l, v % l);
        [
            (r > 0).then(|| v - l),
            (r + 1 < l).then(|| v + l),
            (c > 0).then(|| v - 1),
            (c + 1 < l).then(|| v + 1),
        ]
        .into_iter()
        .flatten()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridAlgo {
    Naive,
    Sweep,
    Recursive,
}

impl GridAlgo {
    pub const ALL: [GridAlgo; 3] = [GridAlgo::Naive, GridAlgo::Sweep, GridAlgo::Recursive];

    pub fn name(self) -> &'static str {
        match self {
            GridAlgo::Naive => "naive",
            GridAlgo::Sweep => "sweep",
            GridAlgo::Recursive => "recursive",
        }
    }
}

impl FromStr for GridAlgo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(GridAlgo::Naive),
            "sweep" => Ok(GridAlgo::Sweep),
            "recursive" => Ok(GridAlgo::Recursive),
            _ => Err(Error::Parse(format!("unknown grid algorithm {s:?}"))),
        }
    }
}

/// Outcomes of one run, with the largest number of qubits held at once.
#[derive(Clone, Debug)]
pub struct GridRun {
    pub outcomes: BitVector,
    pub peak_live: usize,
}

/// Bookkeeping shared by the three orders.
struct Run<'a, R: ?Sized> {
    spec: &'a GridSpec,
    out: BitVector,
    live: usize,
    peak: usize,
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> Run<'a, R> {
    fn new(spec: &'a GridSpec, rng: &'a mut R) -> Self {
        Self { spec, out: BitVector::zeros(spec.num_cells()), live: 0, peak: 0, rng }
    }

    fn add(&mut self, t: &mut LiveTableau, v: usize) {
        t.add_plus(v);
        self.live += 1;
        self.peak = self.peak.max(self.live);
    }

    fn measure(&mut self, t: &mut LiveTableau, v: usize) {
        t.rotate_to_z(v, self.spec.bases[v]);
        let bit = t.measure(v, self.rng);
        self.out.set(v, bit);
        self.live -= 1;
    }

    fn finish(self) -> GridRun {
        GridRun { outcomes: self.out, peak_live: self.peak }
    }
}

pub fn grid_run<R: Rng + ?Sized>(spec: &GridSpec, algo: GridAlgo, rng: &mut R) -> GridRun {
    match algo {
        GridAlgo::Naive => naive(spec, rng),
        GridAlgo::Sweep => sweep(spec, rng),
        GridAlgo::Recursive => recursive(spec, rng),
    }
}

/// Prepares the whole grid state, then measures cell by cell.
pub fn grid_naive<R: Rng + ?Sized>(spec: &GridSpec, rng: &mut R) -> BitVector {
    naive(spec, rng).outcomes
}

/// Column by column, keeping at most two columns live.
pub fn grid_sweep<R: Rng + ?Sized>(spec: &GridSpec, rng: &mut R) -> BitVector {
    sweep(spec, rng).outcomes
}

/// Divide and conquer: each half returns the state of its boundary cells,
/// the halves are joined with CZs across the seam, and cells with no
/// neighbours left outside are measured.
pub fn grid_recursive<R: Rng + ?Sized>(spec: &GridSpec, rng: &mut R) -> BitVector {
    recursive(spec, rng).outcomes
}

fn naive<R: Rng + ?Sized>(spec: &GridSpec, rng: &mut R) -> GridRun {
    let mut run = Run::new(spec, rng);
    let n = spec.num_cells();
    let mut t = LiveTableau::with_capacity(n);
    for v in 0..n {
        run.add(&mut t, v);
    }
    for (a, b) in spec.graph().edges() {
        t.cz(a, b);
    }
    for v in 0..n {
        run.measure(&mut t, v);
    }
    run.finish()
}

fn sweep<R: Rng + ?Sized>(spec: &GridSpec, rng: &mut R) -> GridRun {
    let l = spec.side;
    let mut run = Run::new(spec, rng);
    let mut t = LiveTableau::with_capacity(2 * l);
    for c in 0..l {
        for r in 0..l {
            let v = r * l + c;
            run.add(&mut t, v);
            if r > 0 {
                t.cz(v - l, v);
            }
            if c > 0 {
                t.cz(v - 1, v);
            }
        }
        if c > 0 {
            for r in 0..l {
                run.measure(&mut t, r * l + c - 1);
            }
        }
    }
    for r in 0..l {
        run.measure(&mut t, r * l + l - 1);
    }
    run.finish()
}

/// Half-open cell rectangle.
#[derive(Clone, Copy, Debug)]
struct Rect {
    r0: usize,
    r1: usize,
    c0: usize,
    c1: usize,
}

impl Rect {
    fn contains(&self, l: usize, v: usize) -> bool {
        let (r, c) = (v / l, v % l);
        (self.r0..self.r1).contains(&r) && (self.c0..self.c1).contains(&c)
    }

    fn cells(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        (self.r0..self.r1).flat_map(move |r| (self.c0..self.c1).map(move |c| r * l + c))
    }
}

fn recursive<R: Rng + ?Sized>(spec: &GridSpec, rng: &mut R) -> GridRun {
    let l = spec.side;
    let mut run = Run::new(spec, rng);
    if l > 0 {
        let t = solve_rect(&mut run, Rect { r0: 0, r1: l, c0: 0, c1: l });
        debug_assert_eq!(t.num_qubits(), 0);
    }
    run.finish()
}

fn closed<R: Rng + ?Sized>(run: &Run<'_, R>, rect: &Rect, v: usize) -> bool {
    let l = run.spec.side;
    run.spec.neighbors(v).all(|w| rect.contains(l, w))
}

/// Measures every cell of `rect` except those with a neighbour outside it;
/// returns the state of the rest.
fn solve_rect<R: Rng + ?Sized>(run: &mut Run<'_, R>, rect: Rect) -> LiveTableau {
    let l = run.spec.side;
    let (h, w) = (rect.r1 - rect.r0, rect.c1 - rect.c0);
    if h <= GRID_BASE && w <= GRID_BASE {
        let mut t = LiveTableau::with_capacity(h * w);
        for v in rect.cells(l) {
            run.add(&mut t, v);
        }
        for v in rect.cells(l) {
            let (r, c) = (v / l, v % l);
            if c + 1 < rect.c1 {
                t.cz(v, v + 1);
            }
            if r + 1 < rect.r1 {
                t.cz(v, v + l);
            }
        }
        for v in rect.cells(l) {
            if closed(run, &rect, v) {
                run.measure(&mut t, v);
            }
        }
        return t;
    }
    let (a, b, seam): (Rect, Rect, Vec<(usize, usize)>) = if h >= w {
        let m = rect.r0 + h / 2;
        let seam = (rect.c0..rect.c1).map(|c| ((m - 1) * l + c, m * l + c)).collect();
        (Rect { r1: m, ..rect }, Rect { r0: m, ..rect }, seam)
    } else {
        let m = rect.c0 + w / 2;
        let seam = (rect.r0..rect.r1).map(|r| (r * l + m - 1, r * l + m)).collect();
        (Rect { c1: m, ..rect }, Rect { c0: m, ..rect }, seam)
    };
    let mut t = solve_rect(run, a);
    let u = solve_rect(run, b);
    t.absorb(u);
    for &(x, y) in &seam {
        t.cz(x, y);
    }
    for &(x, y) in &seam {
        for v in [x, y] {
            if t.contains(v) && closed(run, &rect, v) {
                run.measure(&mut t, v);
            }
        }
    }
    t
}
