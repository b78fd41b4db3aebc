//! Samples Pauli measurements of a planar graph state, with and without
//! postselection, and compares the histogram with the exact distribution.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::gss::{result_json, GssInstance};
use treegss::harness::statevec::{conditional_distribution, graph_distribution, outcome_index};
use treegss::harness::stats::stat_tests;
use treegss::planar::planar_solver;
use treegss::tableau::Basis;
use treegss::treedecomp::Graph;

fn main() -> treegss::Result<()> {
    // a wheel: hub 0 joined to the 6-cycle 1..=6
    let mut edges: Vec<(usize, usize)> = (1..=6).map(|v| (0, v)).collect();
    edges.extend((1..=6).map(|v| (v, v % 6 + 1)));
    let graph = Graph::from_edges(7, &edges)?;
    let bases = Basis::parse_list("XYXZYXX")?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let inst = GssInstance::without_postselection(graph.clone(), bases.clone())?;
    let solver = planar_solver(inst)?;
    let shots = 20_000;
    let mut counts = vec![0u64; 1 << 7];
    for _ in 0..shots {
        let z = solver.sample(&mut rng)?.expect("no postselection");
        counts[outcome_index(&z)] += 1;
    }
    let exact = graph_distribution(&graph, &bases)?;
    let fit = stat_tests(&counts, &exact)?;
    println!("unconditioned: TV {:.4}, chi2 p {:.3}", fit.tv_distance, fit.chi2_p);

    let post = BTreeMap::from([(0, true), (3, false)]);
    let inst = GssInstance::new(graph.clone(), bases.clone(), post.clone())?;
    let sampled = inst.sampled();
    let solver = planar_solver(inst)?;
    println!("one postselected run: {}", result_json(&solver.sample(&mut rng)?));
    let mut counts = vec![0u64; 1 << sampled.len()];
    for _ in 0..shots {
        let z = solver.sample(&mut rng)?.expect("event has positive probability");
        counts[outcome_index(&z)] += 1;
    }
    let post: Vec<(usize, bool)> = post.into_iter().collect();
    let cond = conditional_distribution(&exact, &sampled, &post).expect("possible event");
    let fit = stat_tests(&counts, &cond)?;
    println!("postselected:  TV {:.4}, chi2 p {:.3}", fit.tv_distance, fit.chi2_p);

    // on the path 0-1-2-3, Z0 X1 Z2 stabilizes the state, so those three
    // outcomes have even parity
    let path = Graph::path(4);
    let bases = Basis::parse_list("ZXZX")?;
    for (b0, b1, b2) in [(true, false, true), (true, false, false)] {
        let post = BTreeMap::from([(0, b0), (1, b1), (2, b2)]);
        let r = planar_solver(GssInstance::new(path.clone(), bases.clone(), post)?)?.sample(&mut rng)?;
        println!("path with outcomes {}{}{} forced: {}", b0 as u8, b1 as u8, b2 as u8, result_json(&r));
    }
    Ok(())
}
