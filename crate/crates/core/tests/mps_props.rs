mod support;

use mpqc::matrix::consts;
use mpqc::mps::{self, Gate, MPSState, MAX_RDO_QUBITS};
use mpqc::{Error, MPComplex, MPMatrix, MPReal};
use proptest::prelude::*;
use support::*;

fn fidelity(a: &MPMatrix, b: &MPMatrix) -> MPReal {
    let p = a.precision();
    let mut overlap = MPComplex::zero(p);
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        overlap = &overlap + &(&x.conj() * y);
    }
    overlap.norm_sqr()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn matches_state_vector_oracle(seed: u64) {
        let p = prec(256);
        let c = random_circuit(&mut rng(seed), p);
        let mps = c.run_mps(p, MPReal::zero(p));
        let dense = c.run_dense(p);
        let dev = phase_aligned_deviation(mps.to_dense().unwrap().as_slice(), &dense.amps);
        prop_assert!(dev <= ten_pow_neg(60, p), "{}", dev);
    }

    #[test]
    fn norm_and_schmidt_form_hold_after_every_gate(seed: u64) {
        let p = prec(256);
        let c = random_circuit(&mut rng(seed), p);
        let mut s = MPSState::with_options(c.n, p, MPReal::zero(p), None).unwrap();
        for st in &c.steps {
            s.apply_gate(&c.gate(st, p)).unwrap();
            let drift = (&s.norm_sqr() - &MPReal::one(p)).abs();
            prop_assert!(drift <= p.tolerance(20), "{} after {}", drift, st.name);
            for b in 0..c.n - 1 {
                let bond = s.bond_vector(b);
                prop_assert_eq!(bond.len(), s.bond_dimensions()[b]);
                prop_assert!(bond.windows(2).all(|w| w[0] >= w[1]));
                prop_assert!(bond.iter().all(MPReal::is_positive));
                let total = bond.iter().fold(MPReal::zero(p), |acc, v| &acc + &v.square());
                prop_assert!((&total - &MPReal::one(p)).abs() <= p.tolerance(20));
            }
        }
        for b in 0..c.n - 1 {
            let rho = s.rdo_block(0, b).unwrap();
            prop_assert!(schmidt_mismatch(&rho, s.bond_vector(b)) <= ten_pow_neg(55, p));
        }
    }

    #[test]
    fn reduced_density_matches_partial_trace(seed: u64, mask in 1u32..64) {
        let p = prec(256);
        let c = random_circuit(&mut rng(seed), p);
        let keep: Vec<usize> = (0..c.n).filter(|q| mask >> q & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let s = c.run_mps(p, MPReal::zero(p));
        let expected = c.run_dense(p).density().partial_trace(&keep).unwrap();
        let got = s.rdo(&keep).unwrap();
        prop_assert!(got.sub(&expected).unwrap().max_abs() <= ten_pow_neg(60, p));
        let tr = (&got.trace().unwrap() - &MPComplex::one(p)).abs();
        prop_assert!(tr <= p.tolerance(20));
        prop_assert!(eigenvalues(&got).last().unwrap() >= &-p.tolerance(20));
    }

    #[test]
    fn full_subset_equals_full_block(seed: u64) {
        let p = prec(256);
        let c = random_circuit(&mut rng(seed), p);
        let s = c.run_mps(p, MPReal::zero(p));
        let all: Vec<usize> = (0..c.n).collect();
        let a = s.rdo(&all).unwrap();
        let b = s.rdo_block(0, c.n - 1).unwrap();
        prop_assert!(a.sub(&b).unwrap().max_abs() <= p.tolerance(20));
    }

    #[test]
    fn gates_only_touch_their_window(seed: u64) {
        let p = prec(256);
        let mut r = rng(seed);
        let c = random_circuit(&mut r, p);
        let before = c.run_mps(p, MPReal::zero(p));
        let width = 3.min(c.n);
        let lo = (seed as usize) % (c.n - width + 1);
        let hi = lo + width - 1;
        let gate = Gate::new(haar_unitary(&mut r, 1 << width, p), &(lo..=hi).collect::<Vec<_>>()).unwrap();
        let mut after = before.clone();
        after.apply_gate(&gate).unwrap();
        for s in (0..c.n).filter(|s| *s < lo || *s > hi) {
            prop_assert_eq!(before.site_tensor(s), after.site_tensor(s));
        }
        for b in (0..c.n - 1).filter(|b| *b < lo || *b >= hi) {
            prop_assert_eq!(before.bond_vector(b), after.bond_vector(b));
        }
    }

    #[test]
    fn truncation_keeps_fidelity(seed: u64) {
        let p = prec(256);
        let c = random_circuit(&mut rng(seed), p);
        let exact = c.run_mps(p, MPReal::zero(p)).to_dense().unwrap();
        let cut = c.run_mps(p, ten_pow_neg(40, p)).to_dense().unwrap();
        let bound = &MPReal::one(p) - &(&MPReal::from_i64(c.n as i64, p) * &ten_pow_neg(70, p));
        prop_assert!(fidelity(&exact, &cut) >= bound);
    }

    #[test]
    fn bond_cap_is_respected(seed: u64, cap in 1usize..4) {
        let p = prec(128);
        let c = random_circuit(&mut rng(seed), p);
        let mut s = MPSState::with_options(c.n, p, MPReal::zero(p), Some(cap)).unwrap();
        for st in &c.steps {
            s.apply_gate(&c.gate(st, p)).unwrap();
            prop_assert!(s.max_bond_dimension() <= cap);
            prop_assert!((&s.norm_sqr() - &MPReal::one(p)).abs() <= p.tolerance(20));
        }
    }
}

#[test]
fn ghz_state() {
    let p = prec(256);
    let n = 7;
    let mut s = MPSState::with_options(n, p, mps::default_truncation(p), None).unwrap();
    s.apply_gate(&Gate::h(0, p)).unwrap();
    for q in 0..n - 1 {
        s.apply_gate(&Gate::cnot(q, q + 1, p).unwrap()).unwrap();
    }
    assert_eq!(s.max_bond_dimension(), 2);
    let half = MPComplex::from_real(MPReal::from_ratio(1, 2, p));
    let mut expected = MPMatrix::zeros(4, 4, p);
    expected[(0, 0)] = half.clone();
    expected[(3, 3)] = half;
    assert!(s.rdo(&[0, 1]).unwrap().sub(&expected).unwrap().max_abs() <= p.tolerance(20));
    assert!(s.rdo(&[0, n - 1]).unwrap().sub(&expected).unwrap().max_abs() <= p.tolerance(20));
    let root = MPReal::from_ratio(1, 2, p).sqrt();
    for b in 0..n - 1 {
        for v in s.bond_vector(b) {
            assert!((v - &root).abs() <= p.tolerance(20));
        }
    }
}

#[test]
fn single_qubit_gates_leave_bonds_alone() {
    let p = prec(128);
    let mut s = MPSState::with_options(4, p, mps::default_truncation(p), None).unwrap();
    for q in 0..4 {
        s.apply_gate(&Gate::h(q, p)).unwrap();
        s.apply_gate(&Gate::t(q, p)).unwrap();
    }
    assert_eq!(s.bond_dimensions(), vec![1, 1, 1]);
    let x = Gate::new(consts::pauli_x(p), &[2]).unwrap();
    s.apply_gate(&x).unwrap();
    assert_eq!(s.max_bond_dimension(), 1);
}

#[test]
fn invalid_requests_are_rejected() {
    let p = prec(64);
    assert!(MPSState::with_options(0, p, MPReal::zero(p), None).is_err());
    assert!(MPSState::with_options(2, p, MPReal::from_i64(-1, p), None).is_err());
    let mut s = MPSState::with_options(5, p, MPReal::zero(p), None).unwrap();
    assert!(matches!(s.apply_gate(&Gate::h(5, p)), Err(Error::InvalidQubits(_))));
    assert!(matches!(s.apply_gate(&Gate::cnot(0, 3, p).unwrap()), Err(Error::InvalidQubits(_))));
    assert!(Gate::cnot(1, 1, p).is_err());
    assert!(Gate::new(MPMatrix::identity(4, p), &[0]).is_err());
    assert!(Gate::new(MPMatrix::identity(2, p).scale_real(&MPReal::from_i64(2, p)), &[0]).is_err());
    assert!(s.rdo(&[]).is_err());
    assert!(s.rdo(&[2, 1]).is_err());
    assert!(s.rdo(&[0, 5]).is_err());
    assert!(s.rdo_block(3, 2).is_err());
    assert!(s.rdo_block(0, 5).is_err());

    let big = MPSState::with_options(MAX_RDO_QUBITS + 1, p, MPReal::zero(p), None).unwrap();
    let all: Vec<usize> = (0..MAX_RDO_QUBITS + 1).collect();
    assert!(matches!(big.rdo(&all), Err(Error::InvalidQubits(_))));
}
