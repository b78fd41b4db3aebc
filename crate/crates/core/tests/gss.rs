use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treegss::f2la::{AffineSubspace, BitMatrix, BitVector};
use treegss::gss::*;
use treegss::harness::statevec::{conditional_distribution, graph_distribution, outcome_index, DenseState};
use treegss::tableau::{Basis, Pauli};
use treegss::treedecomp::{compute_td, norm_p, Graph, TreeDecomposition};

mod common;
use common::{empirical, random_nice_td, tv};

/// Star with centre B and leaves A, C, D (`A,B,C,D = 0,1,2,3`) and the
/// worked decomposition: AB forgets A, BC forgets C, the two copies of B
/// merge with the AB copy as first child, then BD and the empty root.
fn star_fixture() -> (Graph, TreeDecomposition) {
    let g = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
    let bags = vec![vec![0, 1], vec![1], vec![1, 2], vec![1], vec![1], vec![1, 3], vec![]];
    let children = vec![vec![], vec![0], vec![], vec![2], vec![1, 3], vec![4], vec![5]];
    (g, TreeDecomposition::from_bags(bags, children, 6).unwrap())
}

fn random_bases(n: usize, rng: &mut ChaCha8Rng) -> Vec<Basis> {
    (0..n).map(|_| *[Basis::X, Basis::Y, Basis::Z].choose(rng).unwrap()).collect()
}

/// `(U_bases ⊗ I) 𝒞 |+^{n_t}⟩` as a dense vector.
fn measured_circuit_state(c: &GadgetCircuit, bases: &[Basis]) -> DenseState {
    let mut s = DenseState::plus(c.n_total()).unwrap();
    for g in c.gates() {
        s.apply_gate(g);
    }
    let mut all = bases.to_vec();
    all.resize(c.n_total(), Basis::Z);
    s.apply_bases(&all);
    s
}

fn stabilizes_up_to_sign(s: &DenseState, p: &Pauli) -> bool {
    let neg = Pauli::hermitian(p.x.clone(), p.z.clone(), true);
    let pos = Pauli::hermitian(p.x.clone(), p.z.clone(), false);
    s.is_stabilized_by(&pos, 1e-9) || s.is_stabilized_by(&neg, 1e-9)
}

/// Every `(x, z)` with `±X^x Z^z` a stabilizer of `s`, by enumeration.
fn stabilizer_set(s: &DenseState, pattern: &Pattern) -> HashSet<(BitVector, BitVector)> {
    let n = s.num_qubits();
    let mut out = HashSet::new();
    for bits in 0u64..(1 << (2 * n)) {
        let x = BitVector::from_bools(&(0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>());
        let z = BitVector::from_bools(&(0..n).map(|i| bits >> (n + i) & 1 == 1).collect::<Vec<_>>());
        let p = Pauli::hermitian(x.clone(), z.clone(), false);
        if pattern.respects(&p) && stabilizes_up_to_sign(s, &p) {
            out.insert((x, z));
        }
    }
    out
}

fn space(gens: &[&str], offset: &str) -> AffineSubspace {
    let cols: Vec<BitVector> = gens.iter().map(|g| BitVector::parse01(g).unwrap()).collect();
    let off = BitVector::parse01(offset).unwrap();
    AffineSubspace::from_spanning(&BitMatrix::from_cols(&cols, off.len()).unwrap(), off).unwrap()
}

#[test]
fn star_fixture_circuit() {
    let (g, t) = star_fixture();
    let c = build_circuit(&g, &t).unwrap();
    assert_eq!((c.n_data(), c.n_ancilla()), (4, 1));
    assert_eq!(c.qubit_vertex(4), 1);
    assert_eq!(c.gate_count(), g.num_edges() + c.n_ancilla());
    let merge = c.steps().iter().find(|s| matches!(s.gadget, Gadget::Merge { .. })).unwrap();
    // the AB copy of B is the ancilla and the CNOT target
    assert_eq!(merge.gadget, Gadget::Merge { pairs: vec![(1, 4)] });
    assert_eq!(merge.input, vec![4, 1]);
    let gp = derive_gprime(&c);
    let mut want = Graph::from_edges(5, &[(0, 4), (0, 1), (1, 2), (1, 3)]).unwrap();
    assert_eq!(gp.edges(), want.edges());
    want.remove_edge(0, 1);
    assert_ne!(gp.edges(), want.edges());
}

#[test]
fn star_fixture_spaces() {
    let (g, t) = star_fixture();
    let c = build_circuit(&g, &t).unwrap();
    let bases = vec![Basis::X; 4];
    // order a, b, c, d, b'
    let pattern = Pattern::parse("***11,*****").unwrap();
    let chain = StabilizerChain::build(&c, &bases, &pattern).unwrap().unwrap();
    let merge = c.steps().iter().position(|s| matches!(s.gadget, Gadget::Merge { .. })).unwrap();
    // coordinates X_b', X_b, Z_b', Z_b
    let a3 = space(&["0011", "0100", "0001"], "1100");
    assert!(chain.full_space(merge).set_eq(&a3), "{:?}", chain.full_space(merge));
    // coordinates X_b, X_d, Z_b, Z_d
    let a5 = space(&["1000", "1001"], "0110");
    let root = c.root_step();
    assert_eq!(c.steps()[root].input, vec![1, 3]);
    assert!(chain.full_space(root).set_eq(&a5), "{:?}", chain.full_space(root));

    let state = measured_circuit_state(&c, &bases);
    let want = stabilizer_set(&state, &pattern);
    let p_cor = Pauli::parse("IZXXX").unwrap();
    assert!(want.contains(&(p_cor.x.clone(), p_cor.z.clone())));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = HashSet::new();
    for _ in 0..200 * want.len() {
        let p = chain.sample(&mut rng);
        seen.insert((p.x, p.z));
    }
    assert_eq!(seen, want);
}

#[test]
fn pattern_text() {
    let p = Pattern::parse("*1**1,*****").unwrap();
    assert_eq!(p.to_string(), "*1**1,*****");
    assert_eq!(p.len(), 5);
    assert!(p.respects(&Pauli::parse("IXZXX").unwrap()));
    assert!(!p.respects(&Pauli::parse("IIZXX").unwrap()));
    assert!(Pattern::parse("*1,*").is_err());
    assert!(Pattern::parse("*2,**").is_err());
}

#[test]
fn gprime_identity_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut tested = 0;
    while tested < 25 {
        let n = rng.gen_range(1..=6);
        let g = Graph::random_gnp(n, rng.gen_range(0.2..0.8), &mut rng);
        let t = random_nice_td(&g, &mut rng);
        let c = build_circuit(&g, &t).unwrap();
        if c.n_total() > 12 {
            continue;
        }
        tested += 1;
        assert!(c.n_total() as f64 <= norm_p(&t, 1.0));
        assert_eq!(c.gate_count(), g.num_edges() + c.n_ancilla());
        let gp = derive_gprime(&c);
        let mut s = DenseState::plus(c.n_total()).unwrap();
        for gate in c.gates() {
            s.apply_gate(gate);
        }
        assert!(s.proportional_to(&DenseState::graph_state(&gp).unwrap(), 1e-8));
        let anc: Vec<usize> = (n..c.n_total()).collect();
        let proj = s.project_out(&anc, &BitVector::zeros(anc.len()));
        assert!(proj.norm_sqr() > 1e-9);
        assert!(proj.proportional_to(&DenseState::graph_state(&g).unwrap(), 1e-8));
    }
}

#[test]
fn invariants_with_computed_decompositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [10, 80, 200] {
        let g = Graph::random_triangulation(n, &mut rng);
        let t = compute_td(&g, &[]).unwrap();
        let solver = GssSolver::new(GssInstance::without_postselection(g.clone(), vec![Basis::X; n]).unwrap(), Some(&t)).unwrap();
        let c = solver.circuit();
        assert!(c.n_total() as f64 <= norm_p(&t, 1.0));
        assert_eq!(c.gate_count(), g.num_edges() + c.n_ancilla());
    }
}

#[test]
fn raw_samples_follow_the_circuit_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..4 {
        let n = rng.gen_range(2..=5);
        let g = Graph::random_gnp(n, 0.6, &mut rng);
        let t = random_nice_td(&g, &mut rng);
        let c = build_circuit(&g, &t).unwrap();
        if c.n_total() > 7 {
            continue;
        }
        let bases = random_bases(n, &mut rng);
        let exact = measured_circuit_state(&c, &bases).probabilities();
        let mut counts = vec![0u64; exact.len()];
        for _ in 0..20_000 {
            counts[outcome_index(&sample_subroutine(&c, &bases, &mut rng).unwrap())] += 1;
        }
        assert!(tv(&empirical(&counts), &exact) < 0.05);
    }
}

#[test]
fn corrections_are_stabilizers_respecting_the_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let n = rng.gen_range(1..=5);
        let g = Graph::random_gnp(n, 0.5, &mut rng);
        let t = random_nice_td(&g, &mut rng);
        let c = build_circuit(&g, &t).unwrap();
        if c.n_total() > 9 {
            continue;
        }
        let bases = random_bases(n, &mut rng);
        let state = measured_circuit_state(&c, &bases);
        let y = sample_subroutine(&c, &bases, &mut rng).unwrap();

        let inst = GssInstance::without_postselection(g.clone(), bases.clone()).unwrap();
        let p = correct_simple(&inst, &derive_gprime(&c), &y).unwrap();
        assert!(stabilizes_up_to_sign(&state, &p));
        assert!(y.xor(&p.x).slice(n, c.n_total()).is_zero());

        let mut post = BTreeMap::new();
        post.insert(0, rng.gen());
        let inst = GssInstance::new(g.clone(), bases.clone(), post).unwrap();
        assert!(correct_simple(&inst, &derive_gprime(&c), &y).is_err());
        let pattern = build_pattern(&inst, &c, &y).unwrap();
        if let Some(p) = correct_general(&c, &bases, &pattern, &mut rng).unwrap() {
            assert!(pattern.respects(&p));
            assert!(stabilizes_up_to_sign(&state, &p));
        }
    }
}

/// Draws many samples from one instance and compares with the exact
/// conditional distribution; returns `None` when the solver flagged.
fn sampled_tv(inst: &GssInstance, td: Option<&TreeDecomposition>, rng: &mut ChaCha8Rng, shots: usize) -> Option<f64> {
    let solver = GssSolver::new(inst.clone(), td).unwrap();
    let sampled = inst.sampled();
    let mut counts = vec![0u64; 1 << sampled.len()];
    for _ in 0..shots {
        match solver.sample(rng).unwrap() {
            Ok(z) => counts[outcome_index(&z)] += 1,
            Err(ZeroProbability) => return None,
        }
    }
    let probs = graph_distribution(&inst.graph, &inst.bases).unwrap();
    let post: Vec<(usize, bool)> = inst.postselect.iter().map(|(&k, &v)| (k, v)).collect();
    let exact = conditional_distribution(&probs, &sampled, &post).expect("feasible instance");
    Some(tv(&empirical(&counts), &exact))
}

#[test]
fn unconditioned_sampling_matches_exact_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..8 {
        let n = rng.gen_range(1..=5);
        let g = Graph::random_gnp(n, 0.5, &mut rng);
        let inst = GssInstance::without_postselection(g.clone(), random_bases(n, &mut rng)).unwrap();
        let t = random_nice_td(&g, &mut rng);
        let td = if trial % 2 == 0 { Some(&t) } else { None };
        let d = sampled_tv(&inst, td, &mut rng, 20_000).unwrap();
        assert!(d < 0.05, "trial {trial}: tv {d}");
    }
}

#[test]
fn postselected_sampling_matches_exact_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut done = 0;
    while done < 8 {
        let n = rng.gen_range(2..=5);
        let g = Graph::random_gnp(n, 0.5, &mut rng);
        let bases = random_bases(n, &mut rng);
        // pick targets from an outcome that can occur
        let probs = graph_distribution(&g, &bases).unwrap();
        let idx = (0..probs.len()).filter(|&i| probs[i] > 1e-9).collect::<Vec<_>>();
        let hit = *idx.choose(&mut rng).unwrap();
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let k = rng.gen_range(1..n);
        let post = vs[..k].iter().map(|&v| (v, hit >> v & 1 == 1)).collect();
        let inst = GssInstance::new(g.clone(), bases, post).unwrap();
        let t = random_nice_td(&g, &mut rng);
        let d = sampled_tv(&inst, Some(&t), &mut rng, 20_000).expect("feasible event was flagged");
        assert!(d < 0.05, "tv {d}");
        done += 1;
    }
}

#[test]
fn zero_probability_flag_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut impossible = 0;
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let g = Graph::random_gnp(n, 0.5, &mut rng);
        let bases = random_bases(n, &mut rng);
        let probs = graph_distribution(&g, &bases).unwrap();
        let t = random_nice_td(&g, &mut rng);
        let k = rng.gen_range(1..=n);
        for targets in 0..1usize << k {
            let post: Vec<(usize, bool)> = (0..k).map(|v| (v, targets >> v & 1 == 1)).collect();
            let sampled: Vec<usize> = (k..n).collect();
            let feasible = conditional_distribution(&probs, &sampled, &post).is_some();
            let inst = GssInstance::new(g.clone(), bases.clone(), post.into_iter().collect()).unwrap();
            let solver = GssSolver::new(inst, Some(&t)).unwrap();
            for _ in 0..3 {
                assert_eq!(solver.sample(&mut rng).unwrap().is_ok(), feasible);
            }
            impossible += usize::from(!feasible);
        }
    }
    assert!(impossible > 0);
}

#[test]
fn small_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // a lone vertex is |+>: Z is a coin flip, X always reads 0
    let inst = GssInstance::without_postselection(Graph::empty(1), vec![Basis::Z]).unwrap();
    let ones: usize = (0..200).map(|_| solve_instance(&inst, None, &mut rng).unwrap().unwrap().count_ones()).sum();
    assert!((60..140).contains(&ones));
    let inst = GssInstance::without_postselection(Graph::empty(1), vec![Basis::X]).unwrap();
    assert_eq!(solve_instance(&inst, None, &mut rng).unwrap().unwrap().to_string01(), "0");
    // no X-only stabilizer on K2, so XX is uniform
    let k2 = Graph::complete(2);
    let inst = GssInstance::without_postselection(k2.clone(), vec![Basis::X, Basis::X]).unwrap();
    let mut seen = HashSet::new();
    for _ in 0..100 {
        seen.insert(solve_instance(&inst, None, &mut rng).unwrap().unwrap().to_string01());
    }
    assert_eq!(seen.len(), 4);
    // Z on vertex 0 and X on vertex 1 are perfectly correlated: X_1 Z_0 stabilizes
    let inst = GssInstance::new(k2.clone(), vec![Basis::Z, Basis::X], [(0, true)].into_iter().collect()).unwrap();
    for _ in 0..20 {
        assert_eq!(solve_instance(&inst, None, &mut rng).unwrap().unwrap().to_string01(), "1");
    }
    let inst = GssInstance::new(Graph::empty(1), vec![Basis::X], [(0, true)].into_iter().collect()).unwrap();
    assert_eq!(solve_instance(&inst, None, &mut rng).unwrap(), Err(ZeroProbability));
    let inst = GssInstance::without_postselection(Graph::empty(0), vec![]).unwrap();
    assert!(solve_instance(&inst, None, &mut rng).unwrap().unwrap().is_empty());
}

#[test]
fn json_roundtrip() {
    let text = r#"{"graph":{"n":4,"edges":[[0,1],[1,2],[1,3]]},"bases":"XXYZ","postselect":{"3":0}}"#;
    let inst = GssInstance::from_json(text).unwrap();
    assert_eq!(inst.bases, vec![Basis::X, Basis::X, Basis::Y, Basis::Z]);
    assert_eq!(inst.postselect.get(&3), Some(&false));
    assert_eq!(inst.sampled(), vec![0, 1, 2]);
    assert_eq!(GssInstance::from_json(&inst.to_json()).unwrap(), inst);
    let bare = r#"{"graph":{"n":2,"edges":[[0,1]]},"bases":"ZZ"}"#;
    assert!(GssInstance::from_json(bare).unwrap().postselect.is_empty());
    assert!(GssInstance::from_json(r#"{"graph":{"n":2,"edges":[]},"bases":"Z"}"#).is_err());
    assert!(GssInstance::from_json(r#"{"graph":{"n":2,"edges":[]},"bases":"ZZ","postselect":{"5":1}}"#).is_err());
    assert!(GssInstance::from_json(r#"{"graph":{"n":2,"edges":[]},"bases":"ZZ","postselect":{"0":2}}"#).is_err());

    let ok = result_json(&Ok(BitVector::parse01("0110").unwrap()));
    let v: serde_json::Value = serde_json::from_str(&ok).unwrap();
    assert_eq!(v["outcome"], "0110");
    assert!(v["flag"].is_null());
    let v: serde_json::Value = serde_json::from_str(&result_json(&Err(ZeroProbability))).unwrap();
    assert!(v["outcome"].is_null());
    assert_eq!(v["flag"], "zero_probability");
}
