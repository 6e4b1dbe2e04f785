//! Test-side oracles and generators shared by the integration tests.
#![allow(dead_code)]

use mpqc::matrix::consts;
use mpqc::mps::{self, Gate, MPSState};
use mpqc::{MPComplex, MPMatrix, MPReal, Precision};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn prec(bits: u64) -> Precision {
    Precision::new(bits).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `10^(−k)` at `p`.
pub fn ten_pow_neg(k: u32, p: Precision) -> MPReal {
    MPReal::parse_with_prec(&format!("1e-{k}"), p).unwrap()
}

pub fn gaussian(rng: &mut impl Rng, p: Precision) -> MPComplex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    MPComplex::from_f64(re, im, p)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, p: Precision) -> MPMatrix {
    MPMatrix::from_fn(rows, cols, p, |_, _| gaussian(rng, p))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize, p: Precision) -> MPMatrix {
    let a = random_matrix(rng, n, n, p);
    a.add(&a.adjoint()).unwrap()
}

fn inner(a: &[MPComplex], b: &[MPComplex], p: Precision) -> MPComplex {
    let mut acc = MPComplex::zero(p);
    for (x, y) in a.iter().zip(b) {
        acc = &acc + &(&x.conj() * y);
    }
    acc
}

/// Haar-distributed unitary: Gram-Schmidt (applied twice) on the columns of
/// a complex Gaussian matrix.
pub fn haar_unitary(rng: &mut impl Rng, dim: usize, p: Precision) -> MPMatrix {
    let g = random_matrix(rng, dim, dim, p);
    let mut cols: Vec<Vec<MPComplex>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &v, p);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi = &*vi - &(&c * qi);
                }
            }
        }
        let norm = inner(&v, &v, p).re().sqrt();
        cols.push(v.iter().map(|z| z.div_real(&norm)).collect());
    }
    MPMatrix::from_fn(dim, dim, p, |i, j| cols[j][i].clone())
}

/// Plain state-vector simulator; qubit 0 is the most significant bit and
/// the first target is the gate matrix's most significant bit.
#[derive(Clone, Debug)]
pub struct DenseState {
    pub n: usize,
    pub amps: Vec<MPComplex>,
    prec: Precision,
}

impl DenseState {
    pub fn zero(n: usize, p: Precision) -> Self {
        let mut amps = vec![MPComplex::zero(p); 1 << n];
        amps[0] = MPComplex::one(p);
        DenseState { n, amps, prec: p }
    }

    pub fn apply(&mut self, u: &MPMatrix, targets: &[usize]) {
        let k = targets.len();
        let masks: Vec<usize> = targets.iter().map(|&q| 1 << (self.n - 1 - q)).collect();
        let all: usize = masks.iter().sum();
        let spread = |g: usize| -> usize {
            (0..k).filter(|&t| g >> (k - 1 - t) & 1 == 1).map(|t| masks[t]).sum()
        };
        for base in (0..self.amps.len()).filter(|b| b & all == 0) {
            let idx: Vec<usize> = (0..1 << k).map(|g| base | spread(g)).collect();
            let old: Vec<MPComplex> = idx.iter().map(|&i| self.amps[i].clone()).collect();
            for (gp, &i) in idx.iter().enumerate() {
                let mut acc = MPComplex::zero(self.prec);
                for (g, a) in old.iter().enumerate() {
                    acc = &acc + &(&u[(gp, g)] * a);
                }
                self.amps[i] = acc;
            }
        }
    }

    pub fn density(&self) -> MPMatrix {
        let d = self.amps.len();
        MPMatrix::from_fn(d, d, self.prec, |i, j| &self.amps[i] * &self.amps[j].conj())
    }
}

#[derive(Clone, Debug)]
pub struct Step {
    pub name: &'static str,
    pub unitary: MPMatrix,
    pub targets: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Circuit {
    pub n: usize,
    pub steps: Vec<Step>,
}

/// A random circuit on 2..=6 qubits with 1..=20 gates drawn from
/// {H, X, CNOT, CZ, SWAP, Toffoli, U(4), U(8)}; targets lie within three
/// consecutive sites and come in random order.
pub fn random_circuit(rng: &mut impl Rng, p: Precision) -> Circuit {
    let n = rng.random_range(2..=6);
    let len = rng.random_range(1..=20);
    let mut steps = Vec::with_capacity(len);
    while steps.len() < len {
        let pick = rng.random_range(0..8);
        let (name, arity) = match pick {
            0 => ("H", 1),
            1 => ("X", 1),
            2 => ("CNOT", 2),
            3 => ("CZ", 2),
            4 => ("SWAP", 2),
            5 => ("TOFFOLI", 3),
            6 => ("U4", 2),
            _ => ("U8", 3),
        };
        if arity > n {
            continue;
        }
        let width = 3.min(n);
        let lo = rng.random_range(0..=n - width);
        let mut window: Vec<usize> = (lo..lo + width).collect();
        window.shuffle(rng);
        let targets = window[..arity].to_vec();
        let unitary = match name {
            "H" => mps::hadamard(p),
            "X" => consts::pauli_x(p),
            "CNOT" => mps::cnot(p),
            "CZ" => mps::cz(p),
            "SWAP" => mps::swap(p),
            "TOFFOLI" => mps::toffoli(p),
            "U4" => haar_unitary(rng, 4, p),
            _ => haar_unitary(rng, 8, p),
        };
        steps.push(Step { name, unitary, targets });
    }
    Circuit { n, steps }
}

impl Circuit {
    pub fn run_dense(&self, p: Precision) -> DenseState {
        let mut s = DenseState::zero(self.n, p);
        for st in &self.steps {
            s.apply(&st.unitary.with_precision(p), &st.targets);
        }
        s
    }

    pub fn run_mps(&self, p: Precision, trunc: MPReal) -> MPSState {
        let mut s = MPSState::with_options(self.n, p, trunc, None).unwrap();
        for st in &self.steps {
            s.apply_gate(&self.gate(st, p)).unwrap();
        }
        s
    }

    pub fn gate(&self, st: &Step, p: Precision) -> Gate {
        Gate::new(st.unitary.with_precision(p), &st.targets).unwrap()
    }
}

/// `max_k |a_k − phase·b_k|` where `phase` aligns `b` to `a` on the entry of
/// largest modulus in `b`.
pub fn phase_aligned_deviation(a: &[MPComplex], b: &[MPComplex]) -> MPReal {
    let p = a[0].precision();
    let (r, _) = b
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.abs()))
        .fold((0, MPReal::zero(p)), |best, cur| if cur.1 > best.1 { cur } else { best });
    let phase = if a[r].is_zero() {
        MPComplex::one(p)
    } else {
        let ratio = &a[r] * &b[r].conj();
        ratio.div_real(&ratio.abs())
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - &(&phase * y)).abs())
        .fold(MPReal::zero(p), |m, d| m.max(&d))
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigenvalues(a: &MPMatrix) -> Vec<MPReal> {
    mpqc::matrix::eig_hermitian(a).unwrap().values
}

/// `max_v |λ_v − V_s(v)²|` over bond `s`, with eigenvalues of `rho` beyond
/// the bond dimension compared against zero.
pub fn schmidt_mismatch(rho: &MPMatrix, bond: &[MPReal]) -> MPReal {
    let p = rho.precision();
    let ev = eigenvalues(rho);
    let mut worst = MPReal::zero(p);
    for (k, l) in ev.iter().enumerate() {
        let target = bond.get(k).map(MPReal::square).unwrap_or_else(|| MPReal::zero(p));
        worst = worst.max(&(l - &target).abs());
    }
    worst
}
