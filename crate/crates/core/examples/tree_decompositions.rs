//! Separator-based tree decompositions of planar graphs, their nice form,
//! and pulling one back through a coarse-graining.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::treedecomp::{
    compute_td_audited, is_planar, lipton_tarjan, normalize, preimage, validate_td, CoarseGraining, Graph,
};

fn main() -> treegss::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("{:>6} {:>6} {:>6} {:>7} {:>8}", "n", "width", "sqrt n", "nodes", "depth");
    for n in [50, 200, 800, 3200] {
        let g = Graph::random_triangulation(n, &mut rng);
        let (td, audit) = compute_td_audited(&g, &[])?;
        assert!(td.is_nice() && validate_td(&g, &td).is_valid());
        println!("{n:>6} {:>6} {:>6.1} {:>7} {:>8}", td.width(), (n as f64).sqrt(), td.num_nodes(), audit.depth);
    }

    let grid = Graph::grid(12, 12);
    let sep = lipton_tarjan(&grid)?;
    println!(
        "12x12 grid separator: {} vertices, sides of {} and {}",
        sep.s.len(),
        sep.a.len(),
        sep.b.len()
    );

    // two stacked 16x16 grids with every vertex joined to its twin: not
    // planar, but it maps onto one 16x16 grid with fibers of size 2
    let (side, cells) = (16, 256);
    let base = Graph::grid(side, side);
    let mut edges = Vec::new();
    for layer in 0..2 {
        edges.extend(base.edges().into_iter().map(|(u, v)| (layer * cells + u, layer * cells + v)));
    }
    edges.extend((0..cells).map(|v| (v, cells + v)));
    let stack = Graph::from_edges(2 * cells, &edges)?;
    println!("stack is planar: {}", is_planar(&stack));
    let cg = CoarseGraining::new(&stack, &base, (0..2 * cells).map(|v| v % cells).collect())?;
    let (td, _) = compute_td_audited(&base, &[])?;
    let raw = preimage(&td, &cg)?;
    // normalizing compresses small subtrees into their parents, trading
    // bag size (at most 5w + 1) for fewer nodes
    let lifted = normalize(&raw)?;
    assert!(validate_td(&stack, &lifted).is_valid());
    println!(
        "base width {}, preimage width {} (r = {}), normalized width {} over {} nodes",
        td.width(),
        raw.width(),
        cg.r(),
        lifted.width(),
        lifted.num_nodes()
    );
    Ok(())
}
