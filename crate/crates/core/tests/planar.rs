use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treegss::f2la::{rank, BitMatrix, BitVector};
use treegss::gss::{GssInstance, GssSolver};
use treegss::harness::statevec::{conditional_distribution, graph_distribution, outcome_index, DenseState};
use treegss::harness::stats::{stat_tests, two_sample_test};
use treegss::planar::*;
use treegss::tableau::{apply_gate, measure_bases, measure_z_subset, Basis, MeasureMode, Tableau};
use treegss::treedecomp::{CoarseGraining, Graph};
use treegss::Error;

mod common;
use common::coarse_fixture;

fn random_bases(n: usize, rng: &mut ChaCha8Rng) -> Vec<Basis> {
    (0..n).map(|_| *[Basis::X, Basis::Y, Basis::Z].choose(rng).unwrap()).collect()
}

fn support(probs: &[f64]) -> HashSet<usize> {
    (0..probs.len()).filter(|&i| probs[i] > 1e-9).collect()
}

/// Tableau of `U_bases |G⟩` for exact support checks beyond the dense limit.
fn rotated_graph_tableau(g: &Graph, bases: &[Basis]) -> Tableau {
    let mut t = Tableau::graph_state(&g.adjacency_matrix()).unwrap();
    for (q, b) in bases.iter().enumerate() {
        for gate in b.change_gates(q) {
            apply_gate(&mut t, gate).unwrap();
        }
    }
    t
}

fn possible(t: &Tableau, z: &BitVector) -> bool {
    let all: Vec<usize> = (0..t.num_qubits()).collect();
    measure_z_subset(t.clone(), &all, MeasureMode::Postselect(z)).unwrap().is_some()
}

fn window_index(z: &BitVector, window: &[usize]) -> usize {
    window.iter().enumerate().fold(0, |acc, (i, &v)| acc | (usize::from(z.get(v)) << i))
}

#[test]
fn live_tableau_matches_dense_support() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let mut ops = Vec::new();
        for _ in 0..rng.gen_range(0..20) {
            let a = rng.gen_range(0..n);
            match rng.gen_range(0..4) {
                0 => ops.push(('h', a, a)),
                1 => ops.push(('s', a, a)),
                2 => ops.push(('d', a, a)),
                _ if n > 1 => {
                    let b = (a + rng.gen_range(1..n)) % n;
                    ops.push(('c', a, b));
                }
                _ => {}
            }
        }
        let mut dense = DenseState::plus(n).unwrap();
        for &(op, a, b) in &ops {
            match op {
                'h' => dense.h(a),
                's' => dense.s(a),
                'd' => dense.sdg(a),
                _ => dense.cz(a, b),
            }
        }
        let want = support(&dense.probabilities());
        let mut seen = HashSet::new();
        for _ in 0..400 {
            let mut t = LiveTableau::new();
            // labels offset from columns on purpose
            for q in 0..n {
                t.add_plus(100 + q);
            }
            for &(op, a, b) in &ops {
                match op {
                    'h' => t.h(100 + a),
                    's' => t.s(100 + a),
                    'd' => t.sdg(100 + a),
                    _ => t.cz(100 + a, 100 + b),
                }
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut z = BitVector::zeros(n);
            for q in order {
                z.set(q, t.measure(100 + q, &mut rng));
            }
            seen.insert(outcome_index(&z));
        }
        assert_eq!(seen, want, "ops {ops:?}");
    }
}

#[test]
fn two_by_two_every_basis_combination() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = Graph::grid(2, 2);
    let letters = [Basis::X, Basis::Y, Basis::Z];
    for code in 0..81 {
        let bases: Vec<Basis> = (0..4).map(|i| letters[(code / 3usize.pow(i)) % 3]).collect();
        let want = support(&graph_distribution(&g, &bases).unwrap());
        let spec = GridSpec::new(2, bases).unwrap();
        for algo in GridAlgo::ALL {
            let seen: HashSet<usize> = (0..300).map(|_| outcome_index(&grid_run(&spec, algo, &mut rng).outcomes)).collect();
            assert_eq!(seen, want, "{algo:?} on {:?}", spec.bases);
        }
    }
}

#[test]
fn single_cell_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for algo in GridAlgo::ALL {
        // a lone |+⟩ reads 0 in X and is a fair coin in Z
        let x = GridSpec::uniform(1, Basis::X);
        assert!((0..50).all(|_| !grid_run(&x, algo, &mut rng).outcomes.get(0)));
        let z = GridSpec::uniform(1, Basis::Z);
        let ones = (0..400).filter(|_| grid_run(&z, algo, &mut rng).outcomes.get(0)).count();
        assert!((140..260).contains(&ones), "{algo:?}: {ones}");
    }
}

#[test]
fn three_by_three_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let spec = GridSpec::new(3, random_bases(9, &mut rng)).unwrap();
    let exact = graph_distribution(&spec.graph(), &spec.bases).unwrap();
    for algo in GridAlgo::ALL {
        let mut counts = vec![0u64; 512];
        for _ in 0..10_000 {
            counts[outcome_index(&grid_run(&spec, algo, &mut rng).outcomes)] += 1;
        }
        let r = stat_tests(&counts, &exact).unwrap();
        assert!(r.chi2_p > 1e-3, "{algo:?}: {r:?}");
    }
    let inst = GssInstance::without_postselection(spec.graph(), spec.bases.clone()).unwrap();
    let solver = planar_solver(inst).unwrap();
    let mut counts = vec![0u64; 512];
    for _ in 0..10_000 {
        counts[outcome_index(&solver.sample(&mut rng).unwrap().unwrap())] += 1;
    }
    let r = stat_tests(&counts, &exact).unwrap();
    assert!(r.tv_distance < 0.1 && r.chi2_p > 1e-3, "{r:?}");
}

/// Two-sample test on the joint outcome of a few central cells.
fn grid_agreement(side: usize, a: GridAlgo, b: GridAlgo, shots: usize, rng: &mut ChaCha8Rng) -> f64 {
    let spec = GridSpec::random_xy(side, rng);
    let mid = side / 2;
    let window: Vec<usize> = [(mid - 1, mid - 1), (mid - 1, mid), (mid, mid - 1), (mid, mid), (mid - 1, mid + 1), (mid + 1, mid)]
        .iter()
        .map(|&(r, c)| r * side + c)
        .collect();
    let mut hist = |algo| {
        let mut h = vec![0u64; 1 << window.len()];
        for _ in 0..shots {
            h[window_index(&grid_run(&spec, algo, rng).outcomes, &window)] += 1;
        }
        h
    };
    let (ha, hb) = (hist(a), hist(b));
    two_sample_test(&ha, &hb).unwrap().chi2_p
}

#[test]
fn larger_grids_agree_across_algorithms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    assert!(grid_agreement(6, GridAlgo::Recursive, GridAlgo::Naive, 4000, &mut rng) > 1e-3);
    assert!(grid_agreement(10, GridAlgo::Naive, GridAlgo::Recursive, 4000, &mut rng) > 1e-3);
    assert!(grid_agreement(20, GridAlgo::Sweep, GridAlgo::Recursive, 4000, &mut rng) > 1e-3);
}

#[test]
fn grid_outcomes_are_possible() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for side in [5, 9, 12] {
        let spec = GridSpec::random_xy(side, &mut rng);
        let t = rotated_graph_tableau(&spec.graph(), &spec.bases);
        for algo in GridAlgo::ALL {
            for _ in 0..5 {
                assert!(possible(&t, &grid_run(&spec, algo, &mut rng).outcomes), "{algo:?} side {side}");
            }
        }
    }
}

#[test]
fn peak_live_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for side in [16, 100, 256] {
        let spec = GridSpec::random_xy(side, &mut rng);
        let run = grid_run(&spec, GridAlgo::Recursive, &mut rng);
        assert!(run.peak_live <= 10 * side, "side {side}: {}", run.peak_live);
    }
}

/// Eight-vertex planar fixture for the separator decompositions.
fn eight_vertex_planar() -> Graph {
    let e = [(0, 1), (1, 5), (5, 6), (6, 7), (7, 3), (3, 4), (4, 2), (2, 0), (1, 2), (2, 3), (3, 6), (6, 1), (1, 3)];
    Graph::from_edges(8, &e).unwrap()
}

fn planar_fit(inst: &GssInstance, shots: usize, rng: &mut ChaCha8Rng) -> f64 {
    let solver = planar_solver(inst.clone()).unwrap();
    let sampled = inst.sampled();
    let mut counts = vec![0u64; 1 << sampled.len()];
    for _ in 0..shots {
        counts[outcome_index(&solver.sample(rng).unwrap().unwrap())] += 1;
    }
    let probs = graph_distribution(&inst.graph, &inst.bases).unwrap();
    let post: Vec<(usize, bool)> = inst.postselect.iter().map(|(&k, &v)| (k, v)).collect();
    let exact = conditional_distribution(&probs, &sampled, &post).unwrap();
    stat_tests(&counts, &exact).unwrap().chi2_p
}

#[test]
fn simulate_planar_against_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = eight_vertex_planar();
    let bases = random_bases(8, &mut rng);
    let inst = GssInstance::without_postselection(g.clone(), bases.clone()).unwrap();
    assert!(planar_fit(&inst, 10_000, &mut rng) > 1e-3);
    let probs = graph_distribution(&g, &bases).unwrap();
    let hit = *support(&probs).iter().next().unwrap();
    let post: BTreeMap<usize, bool> = [1, 3, 6].iter().map(|&v| (v, hit >> v & 1 == 1)).collect();
    let inst = GssInstance::new(g, bases, post).unwrap();
    assert!(planar_fit(&inst, 10_000, &mut rng) > 1e-3);

    // all-Z on a path: every string is possible
    let inst = GssInstance::without_postselection(Graph::path(6), vec![Basis::Z; 6]).unwrap();
    let want = support(&graph_distribution(&inst.graph, &inst.bases).unwrap());
    let seen: HashSet<usize> = (0..3000).map(|_| outcome_index(&simulate_planar(&inst, &mut rng).unwrap().unwrap())).collect();
    assert_eq!(seen, want);
    assert_eq!(want.len(), 64);

    let k5 = GssInstance::without_postselection(Graph::complete(5), vec![Basis::X; 5]).unwrap();
    assert_eq!(simulate_planar(&k5, &mut rng).unwrap_err(), Error::NotPlanar);
}

#[test]
fn identity_coarse_graining_matches_planar() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = eight_vertex_planar();
    let inst = GssInstance::without_postselection(g.clone(), random_bases(8, &mut rng)).unwrap();
    let a = planar_solver(inst.clone()).unwrap();
    let b = coarse_solver(inst.clone(), &CoarseGraining::identity(8), &g).unwrap();
    assert_eq!(a.circuit().n_total(), b.circuit().n_total());
    let mut ha = vec![0u64; 256];
    let mut hb = vec![0u64; 256];
    for _ in 0..10_000 {
        ha[outcome_index(&a.sample(&mut rng).unwrap().unwrap())] += 1;
        hb[outcome_index(&simulate_coarse(&inst, &CoarseGraining::identity(8), &g, &mut rng).unwrap().unwrap())] += 1;
    }
    assert!(two_sample_test(&ha, &hb).unwrap().chi2_p > 1e-3);
}

/// Valid samples only, and the marginal on `window` agrees with direct
/// full-tableau sampling.
fn check_coarse(inst: &GssInstance, cg: &CoarseGraining, target: &Graph, window: &[usize], rng: &mut ChaCha8Rng) {
    let solver = coarse_solver(inst.clone(), cg, target).unwrap();
    let t = rotated_graph_tableau(&inst.graph, &inst.bases);
    let mut ha = vec![0u64; 1 << window.len()];
    let mut hb = vec![0u64; 1 << window.len()];
    for i in 0..10_000 {
        let z = solver.sample(rng).unwrap().unwrap();
        if i < 200 {
            assert!(possible(&t, &z));
        }
        ha[window_index(&z, window)] += 1;
        let direct = measure_bases(t.clone(), &vec![Basis::Z; inst.graph.n()], MeasureMode::Sample(rng)).unwrap().unwrap();
        hb[window_index(&direct.outcomes, window)] += 1;
    }
    let r = two_sample_test(&ha, &hb).unwrap();
    assert!(r.chi2_p > 1e-3, "{r:?}");
}

#[test]
fn coarse_graining_fixture_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (fine, coarse) = coarse_fixture();
    let cg = CoarseGraining::new(&fine, &coarse, (0..20).map(|v| v / 5).collect()).unwrap();
    let inst = GssInstance::without_postselection(fine, random_bases(20, &mut rng)).unwrap();
    check_coarse(&inst, &cg, &coarse, &[3, 4, 8, 9, 12, 16, 17], &mut rng);
    let bad = CoarseGraining::identity(20);
    assert!(coarse_solver(inst, &bad, &coarse).is_err());
}

#[test]
fn layered_grid_onto_its_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let idx = |x: usize, y: usize, z: usize| (z * 3 + y) * 3 + x;
    let mut fine = Graph::empty(18);
    for z in 0..2 {
        for y in 0..3 {
            for x in 0..3 {
                if x + 1 < 3 {
                    fine.add_edge(idx(x, y, z), idx(x + 1, y, z)).unwrap();
                }
                if y + 1 < 3 {
                    fine.add_edge(idx(x, y, z), idx(x, y + 1, z)).unwrap();
                }
                if z == 0 {
                    fine.add_edge(idx(x, y, 0), idx(x, y, 1)).unwrap();
                }
            }
        }
    }
    let base = Graph::grid(3, 3);
    let cg = CoarseGraining::new(&fine, &base, (0..18).map(|v| v % 9).collect()).unwrap();
    assert_eq!(cg.r(), 2);
    let inst = GssInstance::without_postselection(fine, random_bases(18, &mut rng)).unwrap();
    check_coarse(&inst, &cg, &base, &[3, 4, 5, 12, 13, 14], &mut rng);
}

fn sys(rows: &[&str], b: &str) -> SymmetricSystem {
    SymmetricSystem::new(BitMatrix::parse_rows(rows).unwrap(), BitVector::parse01(b).unwrap()).unwrap()
}

#[test]
fn linear_solver_small_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let swap = sys(&["01", "10"], "11");
    assert_eq!(solve_symmetric_f2(&swap, None, &mut rng).unwrap().unwrap().to_string01(), "11");
    let swap = sys(&["01", "10"], "10");
    assert_eq!(solve_symmetric_f2(&swap, None, &mut rng).unwrap().unwrap().to_string01(), "01");

    // centre 0 with leaves 1 and 2
    let star = ["011", "100", "100"];
    let s = sys(&star, "011");
    let mut seen = HashMap::new();
    for _ in 0..4000 {
        let x = solve_symmetric_f2(&s, None, &mut rng).unwrap().unwrap();
        assert!(s.is_solution(&x));
        *seen.entry(x.to_string01()).or_insert(0u64) += 1;
    }
    assert_eq!(seen.keys().map(String::as_str).collect::<HashSet<_>>(), HashSet::from(["100", "111"]));
    let r = stat_tests(&[seen["100"], seen["111"]], &[0.5, 0.5]).unwrap();
    assert!(r.chi2_p > 1e-3, "{r:?}");
    let s = sys(&star, "010");
    assert_eq!(solve_symmetric_f2(&s, None, &mut rng).unwrap(), None);
    assert!(SymmetricSystem::new(BitMatrix::parse_rows(&["11", "10"]).unwrap(), BitVector::zeros(2)).is_err());
    assert!(SymmetricSystem::new(BitMatrix::parse_rows(&["01", "00"]).unwrap(), BitVector::zeros(2)).is_err());
}

#[test]
fn planar_solver_residuals_and_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let a = Graph::grid(4, 4).adjacency_matrix();
    for _ in 0..10 {
        let x0 = BitVector::random(16, &mut rng);
        let s = SymmetricSystem::new(a.clone(), a.mul_vec(&x0).unwrap()).unwrap();
        let x = solve_planar_f2(&s, &mut rng).unwrap().unwrap();
        assert!(s.is_solution(&x));
    }
    let s = SymmetricSystem::new(a.clone(), BitVector::zeros(16)).unwrap();
    let kernel = 1usize << (16 - rank(&a));
    let mut seen = HashSet::new();
    for _ in 0..40 * kernel {
        let x = solve_planar_f2(&s, &mut rng).unwrap().unwrap();
        assert!(s.is_solution(&x));
        seen.insert(x);
    }
    assert_eq!(seen.len(), kernel);
    assert!(seen.contains(&BitVector::zeros(16)));

    // a triangulation with rank deficit
    let mut tested = 0;
    while tested < 3 {
        let g = Graph::random_triangulation(12, &mut rng);
        let a = g.adjacency_matrix();
        let r = rank(&a);
        if r == 12 {
            continue;
        }
        tested += 1;
        let b = a.mul_vec(&BitVector::random(12, &mut rng)).unwrap();
        let s = SymmetricSystem::new(a, b).unwrap();
        let count = 1usize << (12 - r);
        let seen: HashSet<BitVector> = (0..40 * count).map(|_| solve_planar_f2(&s, &mut rng).unwrap().unwrap()).collect();
        assert_eq!(seen.len(), count);
    }
    let k5 = SymmetricSystem::new(Graph::complete(5).adjacency_matrix(), BitVector::zeros(5)).unwrap();
    assert_eq!(solve_planar_f2(&k5, &mut rng).unwrap_err(), Error::NotPlanar);
}

#[test]
fn solver_text_input() {
    let s = SymmetricSystem::parse("3 3\n011\n100\n100\n", "011").unwrap();
    assert_eq!(s.n(), 3);
    assert!(SymmetricSystem::parse("3 3\n011\n100\n", "011").is_err());
    assert_eq!(BitMatrix::parse_text(&s.a.to_text()).unwrap(), s.a);
    // the decomposition-free and tree routes agree on feasibility
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let inst_td = treegss::treedecomp::compute_td(&s.graph(), &[]).unwrap();
    let x = solve_symmetric_f2(&s, Some(&inst_td), &mut rng).unwrap().unwrap();
    assert!(s.is_solution(&x));
    let _ = GssSolver::new(GssInstance::without_postselection(s.graph(), vec![Basis::Z; 3]).unwrap(), None).unwrap();
}
