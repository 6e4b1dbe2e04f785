//! Thin singular value decomposition by one-sided (Hestenes) Jacobi
//! rotations. A double-precision SVD supplies the starting basis, so the
//! multiprecision sweeps begin close to convergence and their number
//! depends on the working precision rather than the matrix size.

use nalgebra::{Complex, DMatrix};

use super::eig::{jacobi_angle, Rotation};
use super::{conj_dot, dot, norm_sqr, sub_scaled, MPMatrix};
use crate::error::{Error, Result};
use crate::precision::{MPComplex, MPReal, Precision};

const MAX_SWEEPS: usize = 100;

/// `A = U · diag(σ) · V†` with `U` of shape m×k, `V` of shape n×k and
/// `k = min(m, n)`; σ is non-negative and descending.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: MPMatrix,
    pub singular_values: Vec<MPReal>,
    pub v: MPMatrix,
}

pub fn svd(a: &MPMatrix) -> Result<SvdResult> {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.adjoint())?;
        Ok(SvdResult {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        })
    }
}

type Columns = Vec<Vec<MPComplex>>;

fn unit_columns(n: usize, prec: Precision) -> Columns {
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { MPComplex::one(prec) } else { MPComplex::zero(prec) })
                .collect()
        })
        .collect()
}

/// Right singular vectors of `a` in double precision, lifted to `prec` and
/// re-orthonormalized there. Falls back to the identity when the
/// double-precision solver fails.
fn starting_basis(a: &MPMatrix) -> Columns {
    let (m, n) = a.shape();
    let prec = a.precision();
    let scale = a.max_abs();
    if scale.is_zero() || n == 1 {
        return unit_columns(n, prec);
    }
    let approx = DMatrix::from_fn(m, n, |i, j| {
        let z = &a[(i, j)];
        Complex::new((z.re() / &scale).to_f64(), (z.im() / &scale).to_f64())
    });
    let v_t = nalgebra::linalg::SVD::try_new(approx, false, true, f64::EPSILON, 10_000).and_then(|s| s.v_t);
    let Some(v_t) = v_t.filter(|v| v.nrows() == n && v.iter().all(|z| z.re.is_finite() && z.im.is_finite())) else {
        return unit_columns(n, prec);
    };
    let mut basis: Columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut x: Vec<MPComplex> = (0..n).map(|i| MPComplex::from_f64(v_t[(j, i)].re, -v_t[(j, i)].im, prec)).collect();
        // One Gram-Schmidt pass suffices: the input is already orthonormal
        // to double precision.
        for b in &basis {
            let c = conj_dot(prec, || b.iter().zip(x.iter()));
            sub_scaled(&mut x, &c, b);
        }
        let norm = norm_sqr(prec, x.iter()).sqrt();
        if norm.is_zero() {
            return unit_columns(n, prec);
        }
        basis.push(x.iter().map(|z| z.div_real(&norm)).collect());
    }
    basis
}

/// Orthogonalizes the columns of `cols` in place by one-sided Jacobi
/// rotations, applying the same rotations to `acc`.
fn jacobi_columns(cols: &mut Columns, acc: &mut Columns, prec: Precision) -> Result<()> {
    let n = cols.len();
    let tol = prec.tolerance(8);
    for _ in 0..MAX_SWEEPS {
        let mut norms: Vec<MPReal> = cols.iter().map(|c| norm_sqr(prec, c.iter())).collect();
        // Columns at rounding level relative to the whole matrix cannot be
        // orthogonalized further; rotating them only churns noise.
        let floor = &negligible(prec, &norms);
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                if norms[i] <= *floor || norms[j] <= *floor {
                    continue;
                }
                let gamma = conj_dot(prec, || cols[i].iter().zip(cols[j].iter()));
                let g = gamma.abs();
                if g <= &tol * &(&norms[i] * &norms[j]).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, t) = jacobi_angle(&norms[i], &norms[j], &g);
                let mut rot = Rotation::new(&c, &s, &gamma.div_real(&g).conj());
                for set in [&mut *cols, &mut *acc] {
                    let (left, right) = set.split_at_mut(j);
                    for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                        rot.apply(x, y);
                    }
                }
                let tg = &t * &g;
                norms[i] = (&norms[i] - &tg).max(&MPReal::zero(prec));
                norms[j] = &norms[j] + &tg;
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence("one-sided Jacobi SVD"))
}

fn svd_tall(a: &MPMatrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let prec = a.precision();
    let mut vcols = starting_basis(a);
    let mut cols: Columns = (0..m)
        .map(|i| a.row(i))
        .fold(vec![Vec::with_capacity(m); n], |mut acc, row| {
            for (j, v) in vcols.iter().enumerate() {
                acc[j].push(dot(prec, || row.iter().zip(v.iter())));
            }
            acc
        });
    jacobi_columns(&mut cols, &mut vcols, prec)?;

    let norms: Vec<MPReal> = cols.iter().map(|c| norm_sqr(prec, c.iter())).collect();
    let floor = negligible(prec, &norms);
    let sigma: Vec<MPReal> = norms.iter().map(MPReal::sqrt).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut ucols: Columns = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] <= floor {
            missing.push(slot);
            ucols.push(Vec::new());
        } else {
            ucols.push(cols[j].iter().map(|z| z.div_real(&sigma[j])).collect());
        }
    }
    for slot in missing {
        ucols[slot] = complete_basis(&ucols, m, prec);
    }

    let u = MPMatrix::from_fn(m, n, prec, |i, j| ucols[j][i].clone());
    let v = MPMatrix::from_fn(n, n, prec, |i, j| vcols[order[j]][i].clone());
    let singular_values = order.iter().map(|&j| sigma[j].clone()).collect();
    Ok(SvdResult { u, singular_values, v })
}

/// Squared column norm below which a column is numerically zero:
/// `(2^(−p+8)·‖A‖_F)²`.
fn negligible(prec: Precision, norms: &[MPReal]) -> MPReal {
    let total = norms.iter().fold(MPReal::zero(prec), |acc, x| &acc + x);
    &total * &prec.tolerance(8).square()
}

/// A unit vector orthogonal to every non-empty column in `basis`, chosen
/// among the canonical basis vectors as the one with the largest residual.
fn complete_basis(basis: &[Vec<MPComplex>], m: usize, prec: Precision) -> Vec<MPComplex> {
    let project_out = |mut x: Vec<MPComplex>| {
        for _ in 0..2 {
            for b in basis.iter().filter(|b| !b.is_empty()) {
                let coeff = conj_dot(prec, || b.iter().zip(x.iter()));
                sub_scaled(&mut x, &coeff, b);
            }
        }
        x
    };
    let (best, norm) = (0..m)
        .map(|k| {
            let e: Vec<MPComplex> = (0..m)
                .map(|i| if i == k { MPComplex::one(prec) } else { MPComplex::zero(prec) })
                .collect();
            let r = project_out(e);
            let nrm = norm_sqr(prec, r.iter()).sqrt();
            (r, nrm)
        })
        .fold(None, |best: Option<(Vec<MPComplex>, MPReal)>, (r, nrm)| match best {
            Some((_, ref bn)) if *bn >= nrm => best,
            _ => Some((r, nrm)),
        })
        .expect("m > 0");
    best.iter().map(|z| z.div_real(&norm)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(256).unwrap()
    }

    fn reconstruct(r: &SvdResult) -> MPMatrix {
        let k = r.singular_values.len();
        let s = MPMatrix::real_diagonal(&r.singular_values);
        assert_eq!(s.rows(), k);
        r.u.matmul(&s).unwrap().matmul(&r.v.adjoint()).unwrap()
    }

    #[test]
    fn diagonal_singular_values() {
        let d = MPMatrix::real_diagonal(&[MPReal::from_i64(3, p()), MPReal::from_i64(4, p())]);
        let r = svd(&d).unwrap();
        assert!(r.singular_values[0] == MPReal::from_i64(4, p()));
        assert!(r.singular_values[1] == MPReal::from_i64(3, p()));
        assert!(reconstruct(&r) == d);
    }

    #[test]
    fn zero_matrix() {
        let z = MPMatrix::zeros(3, 2, p());
        let r = svd(&z).unwrap();
        assert!(r.singular_values.iter().all(MPReal::is_zero));
        let gram = r.u.adjoint().matmul(&r.u).unwrap();
        assert!(gram == MPMatrix::identity(2, p()));
    }

    #[test]
    fn rank_deficient_and_wide() {
        let a = MPMatrix::from_fn(2, 4, p(), |i, j| MPComplex::from_f64((j + 1) as f64, i as f64 * (j + 1) as f64, p()));
        let r = svd(&a).unwrap();
        assert_eq!(r.u.shape(), (2, 2));
        assert_eq!(r.v.shape(), (4, 2));
        let err = reconstruct(&r).sub(&a).unwrap().max_abs();
        assert!(err <= &p().tolerance(16) * &a.max_abs());
        let gram = r.u.adjoint().matmul(&r.u).unwrap();
        assert!(gram.sub(&MPMatrix::identity(2, p())).unwrap().max_abs() <= p().tolerance(16));
    }

    #[test]
    fn rank_one_up_to_rounding_converges() {
        // Second column equals the first except for a perturbation far below
        // rounding level, so its orthogonal residual is pure noise.
        let third = MPReal::from_ratio(1, 3, p());
        let tiny = MPReal::exp2(-400, p());
        let a = MPMatrix::from_fn(4, 3, p(), |i, j| {
            let base = MPComplex::new(&third * &MPReal::from_i64(i as i64 + 1, p()), third.clone());
            match j {
                0 => base,
                1 => &base + &MPComplex::from_real(if i == 2 { tiny.clone() } else { MPReal::zero(p()) }),
                _ => base.scale(&MPReal::from_i64(-2, p())),
            }
        });
        let r = svd(&a).unwrap();
        let gram = r.u.adjoint().matmul(&r.u).unwrap();
        assert!(gram.sub(&MPMatrix::identity(3, p())).unwrap().max_abs() <= p().tolerance(16));
        let err = reconstruct(&r).sub(&a).unwrap().max_abs();
        assert!(err <= &p().tolerance(16) * &a.max_abs());
    }
}
