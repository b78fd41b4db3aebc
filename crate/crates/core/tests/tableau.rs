mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treegss::f2la::{BitMatrix, BitVector};
use treegss::harness::statevec::DenseState;
use treegss::tableau::*;

fn random_pauli(n: usize, rng: &mut ChaCha8Rng) -> Pauli {
    Pauli {
        alpha: rng.gen(),
        beta: rng.gen(),
        x: BitVector::random(n, rng),
        z: BitVector::random(n, rng),
    }
}

#[test]
fn pauli_mul_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..4);
        let a = random_pauli(n, &mut rng);
        let b = random_pauli(n, &mut rng);
        let prod = pauli_mul(&a, &b).unwrap();
        assert!(approx_eq(&pauli_dense(&prod), &matmul(&pauli_dense(&a), &pauli_dense(&b))));
    }
    let chain: Vec<Pauli> = (0..3).map(|_| random_pauli(1, &mut rng)).collect();
    let left = pauli_mul(&pauli_mul(&chain[0], &chain[1]).unwrap(), &chain[2]).unwrap();
    let dense = matmul(&matmul(&pauli_dense(&chain[0]), &pauli_dense(&chain[1])), &pauli_dense(&chain[2]));
    assert!(approx_eq(&pauli_dense(&left), &dense));
}

#[test]
fn hadamard_maps_x_to_z() {
    let mut t = Tableau::identity(1);
    apply_gate(&mut t, Gate::H(0)).unwrap();
    let out = t.conjugate_pauli(&Pauli::parse("X").unwrap()).unwrap();
    assert_eq!(out, Pauli::parse("Z").unwrap());
    let id = Tableau::identity(3);
    let p = Pauli::parse("-XYZ").unwrap();
    assert_eq!(id.conjugate_pauli(&p).unwrap(), p);
}

#[test]
fn conjugation_matches_dense_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let n = rng.gen_range(1..5);
        let (t, gates) = random_clifford(n, 25, &mut rng);
        let u = unitary_of(n, &gates);
        let p = random_pauli(n, &mut rng);
        let q = t.conjugate_pauli(&p).unwrap();
        let want = matmul(&matmul(&u, &pauli_dense(&p)), &dagger(&u));
        assert!(approx_eq(&pauli_dense(&q), &want), "gates {gates:?}");
    }
}

#[test]
fn conjugate_many_regimes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &(n, k) in &[(6, 8), (40, 3), (70, 90), (130, 20), (5, 1)] {
        let (t, _) = random_clifford(n, 12 * n, &mut rng);
        let mut rows = BitMatrix::random(k, 2 * n, &mut rng);
        if n == 40 {
            // narrow support on a handful of qubits
            let noise = BitMatrix::random(k, 2 * n, &mut rng);
            rows = BitMatrix::from_fn(k, 2 * n, |r, c| (c % n) < 4 && noise.get(r, c));
        }
        let mut expect = Vec::new();
        for i in 0..k {
            let r = rows.row(i);
            let p = Pauli::from_xz(r.slice(0, n), r.slice(n, 2 * n));
            expect.push(t.conjugate_pauli(&p).unwrap());
        }
        for regime in [Regime::Sequential, Regime::NarrowBlock, Regime::RecursiveHalving, Regime::Auto] {
            let (m, a, b) = t.conjugate_many_with(&rows, regime).unwrap();
            for (i, e) in expect.iter().enumerate() {
                assert_eq!(m.row(i), e.bits(), "{regime:?}");
                assert_eq!(a.get(i), e.alpha, "{regime:?}");
                assert_eq!(b.get(i), e.beta, "{regime:?} n={n} row {i}");
            }
        }
    }
}

#[test]
fn identity_rows_give_identity() {
    let t = Tableau::identity(4);
    let (m, a, _) = t.conjugate_many(&BitMatrix::identity(8)).unwrap();
    assert_eq!(m, BitMatrix::identity(8));
    assert!(a.is_zero());
}

#[test]
fn compose_matches_sequential_gates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let gates = {
            let (_, g) = random_clifford(8, 40, &mut rng);
            g
        };
        let mut whole = Tableau::identity(8);
        for &g in &gates {
            apply_gate(&mut whole, g).unwrap();
        }
        let (a, b) = gates.split_at(gates.len() / 2);
        let mut t1 = Tableau::identity(8);
        a.iter().for_each(|&g| apply_gate(&mut t1, g).unwrap());
        let mut t2 = Tableau::identity(8);
        b.iter().for_each(|&g| apply_gate(&mut t2, g).unwrap());
        assert_eq!(compose(&t1, &t2).unwrap(), whole);
    }
}

#[test]
fn compose_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (t, _) = random_clifford(5, 60, &mut rng);
    let id = Tableau::identity(5);
    assert_eq!(compose(&id, &t).unwrap(), t);
    assert_eq!(compose(&t, &id).unwrap(), t);
    let mut h = Tableau::identity(1);
    apply_gate(&mut h, Gate::H(0)).unwrap();
    assert!(compose(&h, &h).unwrap().is_identity());
    assert!(compose(&t, &t.inverse()).unwrap().is_identity());
    assert!(compose(&t.inverse(), &t).unwrap().is_identity());
}

#[test]
fn compose_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let a = random_clifford(6, 50, &mut rng).0;
        let b = random_clifford(6, 50, &mut rng).0;
        let c = random_clifford(6, 50, &mut rng).0;
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn compose_on_subset_matches_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (t1, _) = random_clifford(9, 80, &mut rng);
        let (small, gates) = random_clifford(3, 30, &mut rng);
        let qubits = [7usize, 2, 4];
        let mut whole = t1.clone();
        for g in gates {
            let mapped = match g {
                Gate::H(q) => Gate::H(qubits[q]),
                Gate::S(q) => Gate::S(qubits[q]),
                Gate::Sdg(q) => Gate::Sdg(qubits[q]),
                Gate::X(q) => Gate::X(qubits[q]),
                Gate::Z(q) => Gate::Z(qubits[q]),
                Gate::YBasisChange(q) => Gate::YBasisChange(qubits[q]),
                Gate::Cz(a, b) => Gate::Cz(qubits[a], qubits[b]),
                Gate::Cnot(a, b) => Gate::Cnot(qubits[a], qubits[b]),
            };
            apply_gate(&mut whole, mapped).unwrap();
        }
        assert_eq!(compose_on(&t1, &small, &qubits).unwrap(), whole);
    }
}

#[test]
fn gate_periodicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (t, _) = random_clifford(4, 40, &mut rng);
    let mut u = t.clone();
    apply_gate(&mut u, Gate::H(2)).unwrap();
    apply_gate(&mut u, Gate::H(2)).unwrap();
    assert_eq!(u, t);
    for _ in 0..4 {
        apply_gate(&mut u, Gate::S(1)).unwrap();
    }
    assert_eq!(u, t);
    assert!(apply_gate(&mut u, Gate::H(4)).is_err());
}

#[test]
fn graph_state_stabilizers() {
    let mut t = Tableau::plus_state(2);
    apply_gate(&mut t, Gate::Cz(0, 1)).unwrap();
    assert_eq!(t.stabilizer_sign(&Pauli::parse("XZ").unwrap()), Some(false));
    assert_eq!(t.stabilizer_sign(&Pauli::parse("ZX").unwrap()), Some(false));
    assert_eq!(t.stabilizer_sign(&Pauli::parse("XX").unwrap()), None);
    let mut dense = DenseState::plus(2).unwrap();
    dense.cz(0, 1);
    for p in t.stabilizers() {
        assert!(dense.is_stabilized_by(&p, 1e-9));
    }
}

#[test]
fn stabilizers_match_statevector() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = rng.gen_range(1..7);
        let (t, gates) = random_clifford(n, 30, &mut rng);
        let mut dense = DenseState::zero(n).unwrap();
        gates.iter().for_each(|&g| dense.apply_gate(g));
        for p in t.stabilizers() {
            assert!(dense.is_stabilized_by(&p, 1e-9));
        }
    }
}

#[test]
fn cz_batch_matches_sequential() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (t, _) = random_clifford(10, 100, &mut rng);
    let mut a = BitMatrix::zeros(10, 10);
    let mut seq = t.clone();
    for u in 0..10 {
        for v in u + 1..10 {
            if rng.gen_bool(0.4) {
                a.set(u, v, true);
                a.set(v, u, true);
                apply_gate(&mut seq, Gate::Cz(u, v)).unwrap();
            }
        }
    }
    let mut batch = t.clone();
    batch.apply_cz_batch(&a).unwrap();
    assert_eq!(batch, seq);
    let mut same = t.clone();
    same.apply_cz_batch(&BitMatrix::zeros(10, 10)).unwrap();
    assert_eq!(same, t);
    let mut bad = BitMatrix::zeros(10, 10);
    bad.set(0, 1, true);
    assert!(same.apply_cz_batch(&bad).is_err());
}

#[test]
fn tensor_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (a, ga) = random_clifford(3, 30, &mut rng);
    let (b, gb) = random_clifford(2, 30, &mut rng);
    let t = tensor(&a, &b);
    t.check_invariants().unwrap();
    assert_eq!(tensor(&a, &Tableau::identity(0)), a);
    assert_eq!(tensor(&Tableau::plus_state(1), &Tableau::plus_state(1)), Tableau::plus_state(2));
    let mut dense = DenseState::zero(5).unwrap();
    ga.iter().for_each(|&g| dense.apply_gate(g));
    gb.iter().for_each(|&g| {
        let shifted = match g {
            Gate::H(q) => Gate::H(q + 3),
            Gate::S(q) => Gate::S(q + 3),
            Gate::Sdg(q) => Gate::Sdg(q + 3),
            Gate::X(q) => Gate::X(q + 3),
            Gate::Z(q) => Gate::Z(q + 3),
            Gate::YBasisChange(q) => Gate::YBasisChange(q + 3),
            Gate::Cz(x, y) => Gate::Cz(x + 3, y + 3),
            Gate::Cnot(x, y) => Gate::Cnot(x + 3, y + 3),
        };
        dense.apply_gate(shifted)
    });
    for p in t.stabilizers() {
        assert!(dense.is_stabilized_by(&p, 1e-9));
    }
}

#[test]
fn measure_basic_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let r = measure_z_subset(Tableau::identity(5), &[0, 1, 2, 3, 4], MeasureMode::Sample(&mut rng))
        .unwrap()
        .unwrap();
    assert!(r.outcomes.is_zero());
    assert_eq!(r.remaining.num_qubits(), 0);

    let mut ones = 0;
    for _ in 0..10_000 {
        let r = measure_z_subset(Tableau::plus_state(1), &[0], MeasureMode::Sample(&mut rng))
            .unwrap()
            .unwrap();
        ones += r.outcomes.get(0) as usize;
    }
    assert!((ones as f64 / 1e4 - 0.5).abs() < 0.02);

    let mut bell = Tableau::identity(2);
    apply_gate(&mut bell, Gate::H(0)).unwrap();
    apply_gate(&mut bell, Gate::Cnot(0, 1)).unwrap();
    let mut c00 = 0;
    for _ in 0..4000 {
        let r = measure_z_subset(bell.clone(), &[0, 1], MeasureMode::Sample(&mut rng))
            .unwrap()
            .unwrap();
        assert_eq!(r.outcomes.get(0), r.outcomes.get(1));
        c00 += (!r.outcomes.get(0)) as usize;
    }
    assert!((c00 as f64 / 4000.0 - 0.5).abs() < 0.03);
    let bad = BitVector::parse01("01").unwrap();
    assert!(measure_z_subset(bell.clone(), &[0, 1], MeasureMode::Postselect(&bad)).unwrap().is_none());

    let one = BitVector::parse01("1").unwrap();
    for _ in 0..100 {
        let v = sample_with_postselection(&bell, &[0], &one, &mut rng).unwrap().unwrap();
        assert!(v.get(1));
    }
    let mut ghz = Tableau::identity(3);
    apply_gate(&mut ghz, Gate::H(0)).unwrap();
    apply_gate(&mut ghz, Gate::Cnot(0, 1)).unwrap();
    apply_gate(&mut ghz, Gate::Cnot(1, 2)).unwrap();
    let zero = BitVector::parse01("0").unwrap();
    for _ in 0..100 {
        let v = sample_with_postselection(&ghz, &[0], &zero, &mut rng).unwrap().unwrap();
        assert!(v.is_zero());
    }
}

#[test]
fn measure_bases_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let r = measure_bases(Tableau::identity(3), &[Basis::Z; 3], MeasureMode::Sample(&mut rng))
        .unwrap()
        .unwrap();
    assert!(r.outcomes.is_zero());
    let r = measure_bases(Tableau::plus_state(3), &[Basis::X; 3], MeasureMode::Sample(&mut rng))
        .unwrap()
        .unwrap();
    assert!(r.outcomes.is_zero());
    let mut k2 = Tableau::plus_state(2);
    apply_gate(&mut k2, Gate::Cz(0, 1)).unwrap();
    let mut counts = [0u64; 4];
    for _ in 0..8000 {
        let r = measure_bases(k2.clone(), &[Basis::X, Basis::X], MeasureMode::Sample(&mut rng))
            .unwrap()
            .unwrap();
        counts[treegss::harness::statevec::outcome_index(&r.outcomes)] += 1;
    }
    assert!(tv(&empirical(&counts), &[0.25; 4]) < 0.03);
}

#[test]
fn marginals_match_statevector() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..12 {
        let n = rng.gen_range(1..7);
        let (t, gates) = random_clifford(n, 20, &mut rng);
        let mut dense = DenseState::zero(n).unwrap();
        gates.iter().for_each(|&g| dense.apply_gate(g));
        let want = dense.probabilities();
        let k = rng.gen_range(1..=n);
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.gen_range(0..=i));
        }
        qubits.truncate(k);
        let marg = treegss::harness::statevec::conditional_distribution(&want, &qubits, &[]).unwrap();
        let mut counts = vec![0u64; 1 << k];
        for _ in 0..10_000 {
            let r = measure_z_subset(t.clone(), &qubits, MeasureMode::Sample(&mut rng))
                .unwrap()
                .unwrap();
            counts[treegss::harness::statevec::outcome_index(&r.outcomes)] += 1;
        }
        assert!(tv(&empirical(&counts), &marg) < 0.05);
    }
}

#[test]
fn fast_measurement_matches_single_qubit_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..60 {
        let n = 10;
        let (t, _) = random_clifford(n, rng.gen_range(5..120), &mut rng);
        let k = rng.gen_range(1..=n);
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.gen_range(0..=i));
        }
        qubits.truncate(k);
        let fast = measure_z_subset(t.clone(), &qubits, MeasureMode::Sample(&mut rng))
            .unwrap()
            .unwrap();
        fast.remaining.check_invariants().unwrap();
        let mut slow = t.clone();
        for (i, &q) in qubits.iter().enumerate() {
            let (bit, _) = reference::measure_z(&mut slow, q, Some(fast.outcomes.get(i)), &mut rng);
            assert_eq!(bit, fast.outcomes.get(i));
        }
        let mut sorted: Vec<(usize, bool)> = qubits.iter().enumerate().map(|(i, &q)| (q, fast.outcomes.get(i))).collect();
        sorted.sort();
        let pos: Vec<usize> = sorted.iter().map(|e| e.0).collect();
        let bits = BitVector::from_bools(&sorted.iter().map(|e| e.1).collect::<Vec<_>>());
        let rebuilt = fast.remaining.insert_basis_qubits(&pos, &bits);
        assert!(rebuilt.same_state(&slow));
        assert!(slow.same_state(&rebuilt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariants_survive_random_operations(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, _) = random_clifford(n, 30, &mut rng);
        t.check_invariants().unwrap();
        let (u, _) = random_clifford(n, 30, &mut rng);
        compose(&t, &u).unwrap().check_invariants().unwrap();
        t.inverse().check_invariants().unwrap();
        let k = rng.gen_range(0..=n);
        let qs: Vec<usize> = (0..k).collect();
        let r = measure_z_subset(t.clone(), &qs, MeasureMode::Sample(&mut rng)).unwrap().unwrap();
        r.remaining.check_invariants().unwrap();
    }

    #[test]
    fn inverse_undoes_conjugation(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, _) = random_clifford(n, 40, &mut rng);
        let p = random_pauli(n, &mut rng);
        let q = t.conjugate_pauli(&p).unwrap();
        prop_assert_eq!(t.inverse().conjugate_pauli(&q).unwrap(), p);
    }
}
