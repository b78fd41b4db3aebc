//! Stabilizer tableaux: composition, conjugating Paulis, and measuring many
//! qubits in one batch against one-at-a-time measurement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::f2la::BitVector;
use treegss::tableau::{compose, measure_z_subset, random_clifford, reference, MeasureMode, Pauli};

fn main() -> treegss::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (q1, _) = random_clifford(6, 30, &mut rng);
    let (q2, _) = random_clifford(6, 30, &mut rng);
    let q21 = compose(&q1, &q2)?;
    let p = Pauli::parse("+XIZYII")?;
    let direct = q21.conjugate_pauli(&p)?;
    let stepwise = q2.conjugate_pauli(&q1.conjugate_pauli(&p)?)?;
    println!("Q2 Q1 (XIZYII) (Q2 Q1)^-1 = {}", direct.to_letters());
    assert_eq!(direct, stepwise);
    let round_trip = compose(&q21, &q21.inverse())?;
    println!("Q Q^-1 is the identity: {}", round_trip.is_identity());

    // batch versus sequential measurement on a random 10-qubit state
    let (state, _) = random_clifford(10, 60, &mut rng);
    let qubits = [7, 2, 9, 0];
    let forced = BitVector::parse01("0110")?;
    let mut seq = state.clone();
    let mut determinate = Vec::new();
    let mut possible = true;
    for (i, &q) in qubits.iter().enumerate() {
        let (bit, random) = reference::measure_z(&mut seq, q, Some(forced.get(i)), &mut rng);
        if !random {
            determinate.push(q);
            possible &= bit == forced.get(i);
        }
    }
    println!("determinate among {qubits:?}: {determinate:?}");
    match measure_z_subset(state.clone(), &qubits, MeasureMode::Postselect(&forced))? {
        Some(r) => {
            println!("batch postselection on 0110 succeeds; {} qubits remain", r.remaining.num_qubits());
            assert!(possible);
        }
        None => {
            println!("batch postselection on 0110 has probability zero");
            assert!(!possible);
        }
    }
    let r = measure_z_subset(state, &qubits, MeasureMode::Sample(&mut rng))?.expect("sampling succeeds");
    println!("sampled outcomes {}", r.outcomes.to_string01());
    Ok(())
}
