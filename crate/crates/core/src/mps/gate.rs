use crate::error::{Error, Result};
use crate::matrix::{consts, MPMatrix};
use crate::precision::{MPComplex, MPReal, Precision};

/// A unitary on one, two or three qubits. The first target is the most
/// significant bit of the gate's matrix index.
#[derive(Clone, Debug)]
pub struct Gate {
    unitary: MPMatrix,
    targets: Vec<usize>,
}

impl Gate {
    /// Validates arity, distinct targets, and `‖U†U − I‖_max ≤ 2^(−p+16)`.
    pub fn new(unitary: MPMatrix, targets: &[usize]) -> Result<Gate> {
        let k = targets.len();
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidQubits(format!(
                "gates act on 1 to 3 qubits, got {k} targets"
            )));
        }
        let dim = 1usize << k;
        if unitary.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch(format!(
                "{k}-qubit gate needs a {dim}x{dim} matrix, got {}x{}",
                unitary.rows(),
                unitary.cols()
            )));
        }
        for (i, q) in targets.iter().enumerate() {
            if targets[..i].contains(q) {
                return Err(Error::InvalidQubits(format!("repeated target {q}")));
            }
        }
        let dev = unitary.unitarity_deviation().expect("square");
        if dev > unitary.precision().tolerance(16) {
            return Err(Error::NotUnitary(dev.to_sci_string(6)));
        }
        Ok(Gate {
            unitary,
            targets: targets.to_vec(),
        })
    }

    pub fn unitary(&self) -> &MPMatrix {
        &self.unitary
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn h(q: usize, prec: Precision) -> Gate {
        Self::known(hadamard(prec), &[q])
    }

    pub fn x(q: usize, prec: Precision) -> Gate {
        Self::known(consts::pauli_x(prec), &[q])
    }

    pub fn y(q: usize, prec: Precision) -> Gate {
        Self::known(consts::pauli_y(prec), &[q])
    }

    pub fn z(q: usize, prec: Precision) -> Gate {
        Self::known(consts::pauli_z(prec), &[q])
    }

    pub fn s(q: usize, prec: Precision) -> Gate {
        Self::known(phase(prec, 2), &[q])
    }

    pub fn t(q: usize, prec: Precision) -> Gate {
        Self::known(phase(prec, 4), &[q])
    }

    pub fn cnot(control: usize, target: usize, prec: Precision) -> Result<Gate> {
        Gate::new(cnot(prec), &[control, target])
    }

    pub fn cz(a: usize, b: usize, prec: Precision) -> Result<Gate> {
        Gate::new(cz(prec), &[a, b])
    }

    pub fn swap(a: usize, b: usize, prec: Precision) -> Result<Gate> {
        Gate::new(swap(prec), &[a, b])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize, prec: Precision) -> Result<Gate> {
        Gate::new(toffoli(prec), &[c1, c2, target])
    }

    fn known(unitary: MPMatrix, targets: &[usize]) -> Gate {
        Gate {
            unitary,
            targets: targets.to_vec(),
        }
    }
}

pub fn hadamard(prec: Precision) -> MPMatrix {
    consts::hadamard(prec)
}

/// `diag(1, e^{iπ/k})`.
fn phase(prec: Precision, k: i64) -> MPMatrix {
    let angle = MPReal::pi(prec) / MPReal::from_i64(k, prec);
    MPMatrix::diagonal(&[MPComplex::one(prec), MPComplex::cis(&angle)])
}

/// Permutation matrix sending basis state `j` to `f(j)`.
fn permutation(dim: usize, prec: Precision, f: impl Fn(usize) -> usize) -> MPMatrix {
    let mut m = MPMatrix::zeros(dim, dim, prec);
    for j in 0..dim {
        m[(f(j), j)] = MPComplex::one(prec);
    }
    m
}

pub fn cnot(prec: Precision) -> MPMatrix {
    permutation(4, prec, |j| if j & 2 != 0 { j ^ 1 } else { j })
}

pub fn cz(prec: Precision) -> MPMatrix {
    let mut m = MPMatrix::identity(4, prec);
    m[(3, 3)] = MPComplex::from_f64(-1.0, 0.0, prec);
    m
}

pub fn swap(prec: Precision) -> MPMatrix {
    permutation(4, prec, |j| ((j & 1) << 1) | (j >> 1))
}

pub fn toffoli(prec: Precision) -> MPMatrix {
    permutation(8, prec, |j| if j & 6 == 6 { j ^ 1 } else { j })
}
