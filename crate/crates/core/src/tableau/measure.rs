//! Computational-basis measurement of many qubits at once.
//!
//! The stabilizer X-block on the measured qubits is brought to reduced echelon
//! form through an LSP factorization. Pivot qubits then have uniformly random
//! outcomes and are handled by one batch of row products; the remaining
//! measured qubits are determinate and are read off after a second reduction
//! on the destabilizer side. Measured qubits are removed from the tableau.

use rand::{Rng, RngCore};

use super::products::{row_products, Regime};
use super::{apply_gate, Basis, Tableau};
use crate::error::{Error, Result};
use crate::f2la::{lsp_factorize, mm, BitMatrix, BitVector};

/// How measurement outcomes are chosen.
pub enum MeasureMode<'a> {
    /// Draw random outcomes from the generator.
    Sample(&'a mut dyn RngCore),
    /// Force the given outcomes, one per measured qubit in call order.
    Postselect(&'a BitVector),
}

#[derive(Clone, Debug)]
pub struct MeasurementResult {
    /// Outcomes in the order the qubits were requested.
    pub outcomes: BitVector,
    /// Post-measurement state on the unmeasured qubits, in their original order.
    pub remaining: Tableau,
}

/// Measures `qubits` in the Z basis.
///
/// Returns `Ok(None)` when postselected outcomes have probability zero.
pub fn measure_z_subset(t: Tableau, qubits: &[usize], mut mode: MeasureMode<'_>) -> Result<Option<MeasurementResult>> {
    let n = t.num_qubits();
    let k = qubits.len();
    let mut seen = vec![false; n];
    for &q in qubits {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, size: n });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::Invalid(format!("qubit {q} listed twice")));
        }
    }
    if let MeasureMode::Postselect(bits) = &mode {
        if bits.len() != k {
            return Err(Error::Dimension("postselection length must match qubit count".into()));
        }
    }
    let mut outcomes = BitVector::zeros(k);
    if k == 0 {
        return Ok(Some(MeasurementResult { outcomes, remaining: t }));
    }

    // Step 1: qubits with random outcomes.
    let mut t = t;
    let stab_x = t.m.select_rows(&(n..2 * n).collect::<Vec<_>>()).select_cols(qubits);
    let f = lsp_factorize(&stab_x);
    let r = f.rank;
    let mut excised: Vec<(usize, usize, bool)> = Vec::with_capacity(k);
    if r > 0 {
        let (g, h) = echelon_transforms(&f, n);
        transform_pairs(&mut t, &h, &g);
        let pivots: Vec<usize> = f.perm[..r].iter().map(|&c| qubits[c]).collect();
        let mut z = Vec::with_capacity(r);
        for (tt, &c) in f.perm[..r].iter().enumerate() {
            let bit = match &mut mode {
                MeasureMode::Sample(rng) => rng.gen::<bool>(),
                MeasureMode::Postselect(bits) => bits.get(c),
            };
            outcomes.set(c, bit);
            z.push(bit);
            excised.push((tt, pivots[tt], bit));
        }
        clear_destabilizers(&mut t, &pivots);
        for (tt, &q) in pivots.iter().enumerate() {
            let st = t.row(n + tt);
            t.set_row(tt, &st);
            let mut zrow = BitVector::zeros(2 * n);
            zrow.set(n + q, true);
            t.m.set_row(n + tt, &zrow);
            t.p.set(n + tt, false);
            t.s.set(n + tt, z[tt]);
        }
    }
    let pivot_set: Vec<usize> = excised.iter().map(|e| e.1).collect();
    let t = excise(t, &excised);

    // Step 2: the remaining measured qubits are determinate.
    let rest_pos: Vec<usize> = (0..k).filter(|&i| !pivot_set.contains(&qubits[i])).collect();
    if rest_pos.is_empty() {
        return Ok(Some(MeasurementResult { outcomes, remaining: t }));
    }
    let map = survivor_map(n, &pivot_set);
    let n2 = t.num_qubits();
    let rest: Vec<usize> = rest_pos.iter().map(|&i| map[qubits[i]]).collect();
    let mut t = t;
    let destab_x = t.m.select_rows(&(0..n2).collect::<Vec<_>>()).select_cols(&rest);
    let f2 = lsp_factorize(&destab_x);
    debug_assert_eq!(f2.rank, rest.len(), "determinate Z operators must be independent");
    let (g2, h2) = echelon_transforms(&f2, n2);
    transform_pairs(&mut t, &g2, &h2);
    let mut excised2 = Vec::with_capacity(rest.len());
    for (tt, &c) in f2.perm[..f2.rank].iter().enumerate() {
        let q = rest[c];
        let bit = t.s.get(n2 + tt);
        debug_assert!({
            let mut want = BitVector::zeros(2 * n2);
            want.set(n2 + q, true);
            t.m.row(n2 + tt) == want
        });
        if let MeasureMode::Postselect(bits) = &mode {
            if bits.get(rest_pos[c]) != bit {
                return Ok(None);
            }
        }
        outcomes.set(rest_pos[c], bit);
        excised2.push((tt, q, bit));
    }
    let remaining = excise(t, &excised2);
    Ok(Some(MeasurementResult { outcomes, remaining }))
}

/// From the LSP factors of an `n × k` block, the row transform `G` putting the
/// block in reduced echelon form and its inverse transpose `H`.
fn echelon_transforms(f: &crate::f2la::LspFactors, n: usize) -> (BitMatrix, BitMatrix) {
    let r = f.rank;
    let mut is_pivot = vec![false; n];
    for &p in &f.pivot_rows {
        is_pivot[p] = true;
    }
    let order: Vec<usize> = f.pivot_rows.iter().copied().chain((0..n).filter(|&i| !is_pivot[i])).collect();
    let rk: Vec<usize> = (0..r).collect();
    let u = f.s.select_rows(&f.pivot_rows).select_cols(&rk);
    let uinv = crate::f2la::inv_unit_upper(&u);
    let linv = crate::f2la::inv_unit_lower(&f.l);
    let ql = linv.select_rows(&order);
    let mut g = ql.clone();
    let top = mm(&uinv, &ql.select_rows(&rk));
    for i in 0..r {
        g.set_row(i, &top.row(i));
    }
    // H = diag(Uᵀ, I) · Q · Lᵀ.
    let qlt = f.l.transpose().select_rows(&order);
    let mut h = qlt.clone();
    let toph = mm(&u.transpose(), &qlt.select_rows(&rk));
    for i in 0..r {
        h.set_row(i, &toph.row(i));
    }
    (g, h)
}

/// Replaces destabilizers by `hd · D` and stabilizers by `gs · S`.
fn transform_pairs(t: &mut Tableau, hd: &BitMatrix, gs: &BitMatrix) {
    let n = t.num_qubits();
    let lo: Vec<usize> = (0..n).collect();
    let hi: Vec<usize> = (n..2 * n).collect();
    let d = t.m.select_rows(&lo);
    let s = t.m.select_rows(&hi);
    let dp = t.p.select(&lo);
    let ds = t.s.select(&lo);
    let sp = t.p.select(&hi);
    let ss = t.s.select(&hi);
    let nd = row_products(&d, &dp, &ds, hd, Regime::Auto);
    let ns = row_products(&s, &sp, &ss, gs, Regime::Auto);
    for j in 0..n {
        t.m.set_row(j, &nd.bits.row(j));
        t.p.set(j, nd.alpha.get(j));
        t.s.set(j, nd.beta.get(j));
        t.m.set_row(n + j, &ns.bits.row(j));
        t.p.set(n + j, ns.alpha.get(j));
        t.s.set(n + j, ns.beta.get(j));
    }
}

/// Multiplies stabilizer `t` into every destabilizer `j ≥ r` carrying X on pivot `t`.
fn clear_destabilizers(t: &mut Tableau, pivots: &[usize]) {
    let n = t.num_qubits();
    let r = pivots.len();
    if r == n {
        return;
    }
    let mut coeffs = BitMatrix::zeros(n - r, 2 * n);
    for j in r..n {
        coeffs.set(j - r, j, true);
        for (tt, &q) in pivots.iter().enumerate() {
            if t.m.get(j, q) {
                coeffs.set(j - r, n + tt, true);
            }
        }
    }
    let pr = row_products(&t.m, &t.p, &t.s, &coeffs, Regime::Auto);
    for j in r..n {
        t.m.set_row(j, &pr.bits.row(j - r));
        t.p.set(j, pr.alpha.get(j - r));
        t.s.set(j, pr.beta.get(j - r));
    }
}

/// Removes pairs `(row, qubit, outcome)` whose stabilizer is `±Z_qubit` and
/// whose qubit carries no X on any other row.
fn excise(t: Tableau, pairs: &[(usize, usize, bool)]) -> Tableau {
    if pairs.is_empty() {
        return t;
    }
    let n = t.num_qubits();
    let mut t = t;
    let mut flip = BitVector::zeros(2 * n);
    for &(_, q, z) in pairs {
        if z {
            flip.set(n + q, true);
        }
    }
    for l in n..2 * n {
        if crate::f2la::dot_words(t.m.row_words(l), flip.words()) {
            t.s.flip(l);
        }
    }
    let mut drop_rows = Vec::with_capacity(2 * pairs.len());
    let mut drop_cols = Vec::with_capacity(2 * pairs.len());
    for &(row, q, _) in pairs {
        drop_rows.push(row);
        drop_rows.push(n + row);
        drop_cols.push(q);
        drop_cols.push(n + q);
    }
    let m = t.m.remove_rows(&drop_rows).remove_cols(&drop_cols);
    let mut keep = vec![true; 2 * n];
    for &r in &drop_rows {
        keep[r] = false;
    }
    let idx: Vec<usize> = (0..2 * n).filter(|&i| keep[i]).collect();
    let s = t.s.select(&idx);
    Tableau::from_parts(m, s).expect("excision keeps a square even tableau")
}

fn survivor_map(n: usize, removed: &[usize]) -> Vec<usize> {
    let mut gone = vec![false; n];
    for &q in removed {
        gone[q] = true;
    }
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    for q in 0..n {
        if !gone[q] {
            map[q] = next;
            next += 1;
        }
    }
    map
}

/// Rotates each qubit into its basis and measures all of them.
pub fn measure_bases(t: Tableau, bases: &[Basis], mode: MeasureMode<'_>) -> Result<Option<MeasurementResult>> {
    let n = t.num_qubits();
    if bases.len() != n {
        return Err(Error::Dimension(format!("{} bases for {} qubits", bases.len(), n)));
    }
    let mut t = t;
    for (q, b) in bases.iter().enumerate() {
        for g in b.change_gates(q) {
            apply_gate(&mut t, g)?;
        }
    }
    let all: Vec<usize> = (0..n).collect();
    measure_z_subset(t, &all, mode)
}

/// Postselects `post_qubits` on `post_bits`, then samples every other qubit.
///
/// The returned vector covers all qubits, with the postselected ones set to
/// `post_bits`. `None` means the postselected event has probability zero.
pub fn sample_with_postselection(
    t: &Tableau,
    post_qubits: &[usize],
    post_bits: &BitVector,
    rng: &mut dyn RngCore,
) -> Result<Option<BitVector>> {
    let n = t.num_qubits();
    let Some(first) = measure_z_subset(t.clone(), post_qubits, MeasureMode::Postselect(post_bits))? else {
        return Ok(None);
    };
    let rest_q: Vec<usize> = (0..n).filter(|q| !post_qubits.contains(q)).collect();
    let all: Vec<usize> = (0..rest_q.len()).collect();
    let second = measure_z_subset(first.remaining, &all, MeasureMode::Sample(rng))?
        .expect("sampling never fails");
    let mut out = BitVector::zeros(n);
    for (i, &q) in post_qubits.iter().enumerate() {
        out.set(q, post_bits.get(i));
    }
    for (i, &q) in rest_q.iter().enumerate() {
        out.set(q, second.outcomes.get(i));
    }
    Ok(Some(out))
}

/// One-qubit-at-a-time measurement in the style of CHP, kept as a
/// cross-check for the batched routine.
pub mod reference {
    use rand::{Rng, RngCore};

    use crate::tableau::{pauli_mul, Pauli, Tableau};

    /// Measures qubit `q` in place without removing it. `forced` fixes the
    /// outcome when it is random. Returns the outcome and whether it was random.
    pub fn measure_z(t: &mut Tableau, q: usize, forced: Option<bool>, rng: &mut dyn RngCore) -> (bool, bool) {
        let n = t.num_qubits();
        let anti = (0..n).find(|&i| t.stabilizer(i).x.get(q));
        match anti {
            Some(pi) => {
                let prow = t.stabilizer(pi);
                for i in 0..2 * n {
                    if i != n + pi && t.row(i).x.get(q) {
                        let prod = pauli_mul(&t.row(i), &prow).expect("same width");
                        t.set_row(i, &prod);
                    }
                }
                let outcome = forced.unwrap_or_else(|| rng.gen::<bool>());
                t.set_row(pi, &prow);
                let zq = Pauli::hermitian(
                    crate::f2la::BitVector::zeros(n),
                    crate::f2la::BitVector::unit(n, q),
                    outcome,
                );
                t.set_row(n + pi, &zq);
                (outcome, true)
            }
            None => {
                let mut acc = Pauli::identity(n);
                for j in 0..n {
                    if t.destabilizer(j).x.get(q) {
                        acc = pauli_mul(&acc, &t.stabilizer(j)).expect("same width");
                    }
                }
                (acc.hermitian_sign(), false)
            }
        }
    }
}
