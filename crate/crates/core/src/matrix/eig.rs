//! Hermitian eigendecomposition by cyclic Jacobi rotations, and the matrix
//! functions built on it.

use rug::{Assign, Float};

use super::MPMatrix;
use crate::error::{Error, Result};
use crate::precision::{MPComplex, MPReal, Precision};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order; column `j` of `vectors` pairs with
/// `values[j]`.
#[derive(Clone, Debug)]
pub struct EigResult {
    pub values: Vec<MPReal>,
    pub vectors: MPMatrix,
}

/// `(c, s, t)` of the rotation that annihilates the off-diagonal entry of
/// `[[app, g], [g, aqq]]`, `g > 0`.
pub(super) fn jacobi_angle(app: &MPReal, aqq: &MPReal, g: &MPReal) -> (MPReal, MPReal, MPReal) {
    let prec = g.precision();
    let one = MPReal::one(prec);
    let tau = (aqq - app) / (g.mul_exp2(1));
    let root = (&one + &tau.square()).sqrt();
    let mut t = &one / &(tau.abs() + root);
    if tau.is_sign_negative() && !tau.is_zero() {
        t = -t;
    }
    let c = &one / &(&one + &t.square()).sqrt();
    let s = &t * &c;
    (c, s, t)
}

/// The plane rotation `(x, y) ← (c·x − s·ē·y, s·x + c·ē·y)`, with scratch
/// space so applying it does not allocate.
pub(super) struct Rotation {
    c: Float,
    s: Float,
    er: Float,
    ei: Float,
    t0: Float,
    t1: Float,
}

impl Rotation {
    pub(super) fn new(c: &MPReal, s: &MPReal, e_conj: &MPComplex) -> Self {
        let bits = c.precision().bits();
        Rotation {
            c: c.as_float().clone(),
            s: s.as_float().clone(),
            er: e_conj.re().as_float().clone(),
            ei: e_conj.im().as_float().clone(),
            t0: Float::new(bits),
            t1: Float::new(bits),
        }
    }

    pub(super) fn apply(&mut self, x: &mut MPComplex, y: &mut MPComplex) {
        let Rotation { c, s, er, ei, t0: eyr, t1: eyi } = self;
        let (xr, xi) = x.parts_mut();
        let (yr, yi) = y.parts_mut();
        eyr.assign(&*er * &*yr);
        *eyr -= &*ei * &*yi;
        eyi.assign(&*er * &*yi);
        *eyi += &*ei * &*yr;
        yr.assign(&*s * &*xr);
        *yr += &*c * &*eyr;
        yi.assign(&*s * &*xi);
        *yi += &*c * &*eyi;
        *xr *= &*c;
        *xr -= &*s * &*eyr;
        *xi *= &*c;
        *xi -= &*s * &*eyi;
    }
}

pub fn eig_hermitian(a: &MPMatrix) -> Result<EigResult> {
    a.ensure_hermitian()?;
    let n = a.rows();
    let prec = a.precision();

    // Symmetrize so the iteration sees an exactly Hermitian matrix.
    let mut w = MPMatrix::from_fn(n, n, prec, |i, j| {
        if i == j {
            MPComplex::from_real(a[(i, i)].re().clone())
        } else {
            (&a[(i, j)] + &a[(j, i)].conj()).scale(&MPReal::from_ratio(1, 2, prec))
        }
    });
    let mut v = MPMatrix::identity(n, prec);
    let target = &prec.tolerance(8) * &w.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&w) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&w) > target {
        return Err(Error::NoConvergence("Hermitian Jacobi eigensolver"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w[(j, j)]
            .re()
            .partial_cmp(w[(i, i)].re())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| w[(i, i)].re().clone()).collect();
    let mut vectors = MPMatrix::from_fn(n, n, prec, |i, j| v[(i, order[j])].clone());
    normalize_column_phases(&mut vectors);
    Ok(EigResult { values, vectors })
}

fn off_diagonal_norm(w: &MPMatrix) -> MPReal {
    let n = w.rows();
    let entries = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    super::norm_sqr(w.precision(), entries.map(|(i, j)| &w[(i, j)]).collect::<Vec<_>>().into_iter()).sqrt()
}

fn rotate(w: &mut MPMatrix, v: &mut MPMatrix, p: usize, q: usize) {
    let n = w.rows();
    let apq = w[(p, q)].clone();
    let g = apq.abs();
    if g.is_zero() {
        return;
    }
    let app = w[(p, p)].re().clone();
    let aqq = w[(q, q)].re().clone();
    let (c, s, t) = jacobi_angle(&app, &aqq, &g);
    let mut rot = Rotation::new(&c, &s, &apq.div_real(&g).conj());

    // A ← A·G, V ← V·G on columns p, q.
    for k in 0..n {
        let (mut x, mut y) = (w[(k, p)].clone(), w[(k, q)].clone());
        rot.apply(&mut x, &mut y);
        w[(k, p)] = x;
        w[(k, q)] = y;
        let (mut x, mut y) = (v[(k, p)].clone(), v[(k, q)].clone());
        rot.apply(&mut x, &mut y);
        v[(k, p)] = x;
        v[(k, q)] = y;
    }
    // A ← G†·A on rows p, q; the row transform is the conjugate of the
    // column one.
    for k in 0..n {
        let (mut x, mut y) = (w[(p, k)].conj(), w[(q, k)].conj());
        rot.apply(&mut x, &mut y);
        w[(p, k)] = x.conj();
        w[(q, k)] = y.conj();
    }
    let tg = &t * &g;
    let prec = w.precision();
    w[(p, p)] = MPComplex::from_real(&app - &tg);
    w[(q, q)] = MPComplex::from_real(&aqq + &tg);
    w[(p, q)] = MPComplex::zero(prec);
    w[(q, p)] = MPComplex::zero(prec);
}

/// Rotates each column so that its first component above `2^(−p/2)` in
/// magnitude is real and positive.
fn normalize_column_phases(vectors: &mut MPMatrix) {
    let prec = vectors.precision();
    let floor = MPReal::exp2(-(prec.bits() as i32) / 2, prec);
    for j in 0..vectors.cols() {
        let pivot = (0..vectors.rows())
            .map(|i| vectors[(i, j)].clone())
            .find(|z| z.abs() > floor);
        if let Some(z) = pivot {
            let phase = z.conj().div_real(&z.abs());
            for i in 0..vectors.rows() {
                vectors[(i, j)] = &vectors[(i, j)] * &phase;
            }
        }
    }
}

/// `U · diag(f(λ_j)) · U†`.
fn spectral_map(eig: &EigResult, f: impl Fn(&MPReal) -> MPComplex) -> MPMatrix {
    let u = &eig.vectors;
    let n = u.rows();
    let weights: Vec<MPComplex> = eig.values.iter().map(f).collect();
    let scaled = MPMatrix::from_fn(n, n, u.precision(), |i, j| &u[(i, j)] * &weights[j]);
    scaled.matmul(&u.adjoint()).expect("square factors")
}

/// `exp(A)` for Hermitian `A`.
pub fn exp_hermitian(a: &MPMatrix) -> Result<MPMatrix> {
    let eig = eig_hermitian(a)?;
    Ok(spectral_map(&eig, |l| MPComplex::from_real(l.exp())))
}

/// `exp(−2πi·H·t)` with `H` in Hz and `t` in seconds.
pub fn unitary_evolution(h: &MPMatrix, t: &MPReal) -> Result<MPMatrix> {
    let eig = eig_hermitian(h)?;
    let prec: Precision = h.precision().max(t.precision());
    let two_pi_t = &MPReal::pi(prec).mul_exp2(1) * t;
    Ok(spectral_map(&eig, |l| MPComplex::cis(&-(&two_pi_t * l))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::consts::*;

    fn p() -> Precision {
        Precision::new(256).unwrap()
    }

    fn rdiag(xs: &[i64]) -> MPMatrix {
        MPMatrix::real_diagonal(&xs.iter().map(|&x| MPReal::from_i64(x, p())).collect::<Vec<_>>())
    }

    #[test]
    fn diagonal_input() {
        let eig = eig_hermitian(&rdiag(&[1, 3])).unwrap();
        assert!(eig.values[0] == MPReal::from_i64(3, p()));
        assert!(eig.values[1] == MPReal::from_i64(1, p()));
        let expected = MPMatrix::from_fn(2, 2, p(), |i, j| {
            MPComplex::from_real(MPReal::from_i64((i + j == 1) as i64, p()))
        });
        assert!(eig.vectors == expected);
    }

    #[test]
    fn pauli_spectra() {
        for m in [pauli_x(p()), pauli_y(p()), pauli_z(p())] {
            let eig = eig_hermitian(&m).unwrap();
            let tol = p().tolerance(16);
            assert!((&eig.values[0] - &MPReal::one(p())).abs() <= tol);
            assert!((&eig.values[1] + &MPReal::one(p())).abs() <= tol);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = pauli_x(p());
        m[(0, 1)] = MPComplex::from_f64(2.0, 0.0, p());
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
        assert!(exp_hermitian(&m).is_err());
        assert!(unitary_evolution(&m, &MPReal::one(p())).is_err());
    }

    #[test]
    fn degenerate_vectors_are_orthonormal() {
        let m = MPMatrix::identity(3, p()).add(&MPMatrix::from_fn(3, 3, p(), |_, _| MPComplex::one(p()))).unwrap();
        let eig = eig_hermitian(&m).unwrap();
        let gram = eig.vectors.adjoint().matmul(&eig.vectors).unwrap();
        let dev = gram.sub(&MPMatrix::identity(3, p())).unwrap().max_abs();
        assert!(dev <= p().tolerance(16));
        assert!((&eig.values[0] - &MPReal::from_i64(4, p())).abs() <= p().tolerance(16));
    }

    #[test]
    fn exponential_examples() {
        let zero = MPMatrix::zeros(4, 4, p());
        assert!(exp_hermitian(&zero).unwrap() == MPMatrix::identity(4, p()));
        let a = MPReal::from_ratio(3, 2, p());
        let b = MPReal::from_i64(-2, p());
        let d = MPMatrix::real_diagonal(&[a.clone(), b.clone()]);
        let e = exp_hermitian(&d).unwrap();
        assert!(e == MPMatrix::real_diagonal(&[a.exp(), b.exp()]));
    }

    #[test]
    fn evolution_examples() {
        let h = pauli_z(p());
        let u0 = unitary_evolution(&h, &MPReal::zero(p())).unwrap();
        assert!(u0 == MPMatrix::identity(2, p()));
        let u = unitary_evolution(&h, &MPReal::from_ratio(1, 2, p())).unwrap();
        let minus_id = MPMatrix::identity(2, p()).scale_real(&MPReal::from_i64(-1, p()));
        assert!(u.sub(&minus_id).unwrap().max_abs() <= p().tolerance(8));
    }
}
