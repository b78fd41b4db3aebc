//! Lazy bottom-up simulation of the gadget circuit.

use rand::RngCore;

use super::circuit::{Gadget, GadgetCircuit, GadgetStep};
use crate::error::Result;
use crate::f2la::BitVector;
use crate::tableau::{apply_gate, measure_z_subset, tensor, Basis, Gate, MeasureMode, Tableau};

/// Local gates of a step followed by the basis changes of the data qubits it
/// measures.
pub(crate) fn step_gates(c: &GadgetCircuit, s: &GadgetStep, bases: &[Basis]) -> Vec<Gate> {
    let mut gates = s.local_gates().to_vec();
    if let Gadget::Forget { .. } = s.gadget {
        for &i in s.measured_local() {
            let q = s.input[i];
            if !c.is_ancilla(q) {
                gates.extend(bases[q].change_gates(i));
            }
        }
    }
    gates
}

/// Runs the circuit on `|+^{n_t}⟩`, measuring data qubits in `bases` and
/// merge ancillas in Z as soon as they are done. Returns all `n_t` outcomes.
pub fn sample_subroutine(c: &GadgetCircuit, bases: &[Basis], rng: &mut dyn RngCore) -> Result<BitVector> {
    let mut y = BitVector::zeros(c.n_total());
    let mut states: Vec<Option<Tableau>> = vec![None; c.steps().len()];
    for (i, s) in c.steps().iter().enumerate() {
        let mut t = Tableau::identity(0);
        for &ch in &s.children {
            let st = states[ch].take().expect("child processed");
            t = if t.num_qubits() == 0 { st } else { tensor(&t, &st) };
        }
        if let Gadget::Introduce { qubits } = &s.gadget {
            let fresh = Tableau::plus_state(qubits.len());
            t = if t.num_qubits() == 0 { fresh } else { tensor(&t, &fresh) };
        }
        for g in step_gates(c, s, bases) {
            apply_gate(&mut t, g)?;
        }
        let res = measure_z_subset(t, s.measured_local(), MeasureMode::Sample(rng))?.expect("sampling never fails");
        for (k, &j) in s.measured_local().iter().enumerate() {
            y.set(s.input[j], res.outcomes.get(k));
        }
        states[i] = Some(res.remaining);
    }
    Ok(y)
}
