//! Reduces a Clifford circuit on a planar layout to graph state sampling
//! and checks the sampled outputs against the statevector.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::harness::circuit::{circuit_distribution, CircuitSampler, CliffordCircuit};
use treegss::harness::statevec::outcome_index;
use treegss::harness::stats::stat_tests;

const GHZ_ON_2X3: &str = r#"{
  "n": 6,
  "layout_edges": [[0,1],[1,2],[3,4],[4,5],[0,3],[1,4],[2,5]],
  "gates": [
    {"g": "H", "q": [0]},
    {"g": "CX", "q": [0, 1]}, {"g": "CX", "q": [1, 2]},
    {"g": "CX", "q": [0, 3]}, {"g": "CX", "q": [1, 4]}, {"g": "CX", "q": [2, 5]},
    {"g": "SX", "q": [5]}, {"g": "Z", "q": [3]}
  ]
}"#;

fn main() -> treegss::Result<()> {
    let c = CliffordCircuit::from_json(GHZ_ON_2X3)?;
    let sampler = CircuitSampler::new(&c)?;
    let r = sampler.reduced();
    println!(
        "{} gates over {{H, S, CZ}}, depth {}; reduced to {} qubits with {} Hadamard gadgets",
        c.gates().len(),
        c.depth(),
        r.instance.graph.n(),
        r.middle_h
    );
    let sizes: Vec<usize> = r.coarse.fibers().iter().map(Vec::len).collect();
    println!("group sizes {sizes:?}, bound depth + 4 = {}", c.depth() + 4);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let shots = 10_000;
    let mut counts = vec![0u64; 1 << c.n()];
    for _ in 0..shots {
        counts[outcome_index(&sampler.sample(&mut rng)?)] += 1;
    }
    let exact = circuit_distribution(&c)?;
    for (i, &p) in exact.iter().enumerate().filter(|(_, &p)| p > 1e-9) {
        println!("  {i:06b} (qubit 0 rightmost): exact {p:.3}, sampled {:.3}", counts[i] as f64 / shots as f64);
    }
    let fit = stat_tests(&counts, &exact)?;
    println!("TV {:.4}, chi2 p {:.3}", fit.tv_distance, fit.chi2_p);

    let mut tv = 0.0f64;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let random = CliffordCircuit::random(c.layout().clone(), 4, &mut rng);
        let s = CircuitSampler::new(&random)?;
        let mut counts = vec![0u64; 1 << c.n()];
        for _ in 0..4000 {
            counts[outcome_index(&s.sample(&mut rng)?)] += 1;
        }
        tv = tv.max(stat_tests(&counts, &circuit_distribution(&random)?)?.tv_distance);
    }
    println!("five random depth-4 circuits: worst TV {tv:.4}");
    Ok(())
}
