//! Wall-clock smoke check that a two-qubit gate costs roughly `O(m³)` in
//! the bond dimension. Kept in its own binary so no other test competes for
//! the CPU while it measures.

mod support;

use std::time::Instant;

use mpqc::mps::{Gate, MPSState};
use mpqc::{MPReal, Precision};
use rand::Rng;
use support::*;

/// `2b + 2` qubits where qubit `i` is entangled with qubit `n − 1 − i` for
/// `i < b`, so both bonds around the central pair have dimension `2^b`.
/// Random local rotations give a generic Schmidt spectrum.
fn rainbow(b: usize, p: Precision, r: &mut impl Rng) -> MPSState {
    let n = 2 * b + 2;
    let mut s = MPSState::with_options(n, p, MPReal::zero(p), None).unwrap();
    for k in 0..b {
        s.apply_gate(&Gate::new(haar_unitary(r, 2, p), &[k]).unwrap()).unwrap();
        s.apply_gate(&Gate::cnot(k, k + 1, p).unwrap()).unwrap();
        for j in k + 1..n - 1 - k {
            s.apply_gate(&Gate::swap(j, j + 1, p).unwrap()).unwrap();
        }
    }
    s
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn central_gate_seconds(state: &MPSState, p: Precision, r: &mut impl Rng) -> f64 {
    let b = (state.n_qubits() - 2) / 2;
    let gate = Gate::new(haar_unitary(r, 4, p), &[b, b + 1]).unwrap();
    let mut s = state.clone();
    let start = Instant::now();
    s.apply_gate(&gate).unwrap();
    start.elapsed().as_secs_f64()
}

#[test]
fn doubling_the_bond_costs_at_most_ten_times() {
    let p = prec(256);
    let mut r = rng(5);
    let states: Vec<MPSState> = (3..=6).map(|b| rainbow(b, p, &mut r)).collect();
    for (b, s) in (3..=6).zip(&states) {
        let dims = s.bond_dimensions();
        assert_eq!((dims[b - 1], dims[b + 1]), (1 << b, 1 << b));
    }
    for (k, pair) in states.windows(2).enumerate() {
        let m = 8 << k;
        let reps = if m == 32 { 5 } else { 9 };
        // Alternate the two sizes so slow spells on a shared machine hit
        // both sides of each ratio.
        let ratios: Vec<f64> = (0..reps)
            .map(|_| {
                let t = central_gate_seconds(&pair[0], p, &mut r);
                central_gate_seconds(&pair[1], p, &mut r) / t
            })
            .collect();
        let ratio = median(ratios);
        eprintln!("m = {m}: median cost ratio at 2m {ratio:.2}");
        assert!(ratio <= 10.0, "doubling m = {m} cost {ratio:.2}x");
    }
}
