//! Dense complex matrices over [`MPComplex`].
//!
//! Storage is row-major. Every entry of a matrix shares the matrix's working
//! precision; values written with [`MPMatrix::set`] are rounded to it.
//! Operations never mutate their inputs.

mod eig;
mod fft;
mod svd;

use std::fmt;
use std::ops::{Index, IndexMut};

use rug::{Assign, Float};

use crate::error::{Error, Result};
use crate::precision::{output_digits, MPComplex, MPReal, Precision};

pub use eig::{eig_hermitian, exp_hermitian, unitary_evolution, EigResult};
pub use fft::{abs_elementwise, dft, Series};
pub use svd::{svd, SvdResult};

#[derive(Clone, PartialEq)]
pub struct MPMatrix {
    rows: usize,
    cols: usize,
    prec: Precision,
    data: Vec<MPComplex>,
}

/// `Σ a_k b_k`, accumulated in place at `prec`.
pub(crate) fn dot<'a, I, F>(prec: Precision, pairs: F) -> MPComplex
where
    F: FnOnce() -> I,
    I: Iterator<Item = (&'a MPComplex, &'a MPComplex)>,
{
    let mut re = Float::new(prec.bits());
    let mut im = Float::new(prec.bits());
    let mut t = Float::new(prec.bits());
    for (a, b) in pairs() {
        let (ar, ai, br, bi) = (a.re().as_float(), a.im().as_float(), b.re().as_float(), b.im().as_float());
        t.assign(ar * br);
        re += &t;
        t.assign(ai * bi);
        re -= &t;
        t.assign(ar * bi);
        im += &t;
        t.assign(ai * br);
        im += &t;
    }
    MPComplex::new(MPReal::from_float(re), MPReal::from_float(im))
}

/// `Σ conj(a_k) b_k`.
pub(crate) fn conj_dot<'a, I, F>(prec: Precision, pairs: F) -> MPComplex
where
    F: FnOnce() -> I,
    I: Iterator<Item = (&'a MPComplex, &'a MPComplex)>,
{
    let mut re = Float::new(prec.bits());
    let mut im = Float::new(prec.bits());
    let mut t = Float::new(prec.bits());
    for (a, b) in pairs() {
        let (ar, ai, br, bi) = (a.re().as_float(), a.im().as_float(), b.re().as_float(), b.im().as_float());
        t.assign(ar * br);
        re += &t;
        t.assign(ai * bi);
        re += &t;
        t.assign(ar * bi);
        im += &t;
        t.assign(ai * br);
        im -= &t;
    }
    MPComplex::new(MPReal::from_float(re), MPReal::from_float(im))
}

/// `Σ |x_k|²`.
pub(crate) fn norm_sqr<'a>(prec: Precision, xs: impl Iterator<Item = &'a MPComplex>) -> MPReal {
    let mut acc = Float::new(prec.bits());
    let mut t = Float::new(prec.bits());
    for x in xs {
        let (r, i) = (x.re().as_float(), x.im().as_float());
        t.assign(r * r);
        acc += &t;
        t.assign(i * i);
        acc += &t;
    }
    MPReal::from_float(acc)
}

/// `x ← x − c·b`, elementwise.
pub(crate) fn sub_scaled(x: &mut [MPComplex], c: &MPComplex, b: &[MPComplex]) {
    let Some(first) = x.first() else { return };
    let bits = first.precision().bits();
    let (cr, ci) = (c.re().as_float(), c.im().as_float());
    let mut t = Float::new(bits);
    for (xi, bi) in x.iter_mut().zip(b) {
        let (br, bim) = (bi.re().as_float(), bi.im().as_float());
        let (xr, xim) = xi.parts_mut();
        t.assign(cr * br);
        *xr -= &t;
        t.assign(ci * bim);
        *xr += &t;
        t.assign(cr * bim);
        *xim -= &t;
        t.assign(ci * br);
        *xim -= &t;
    }
}

impl MPMatrix {
    /// Zero matrix at the ambient precision.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Self::zeros(rows, cols, Precision::ambient()))
    }

    /// Zero matrix; panics on an empty shape.
    pub fn zeros(rows: usize, cols: usize, prec: Precision) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape {rows}x{cols}");
        MPMatrix {
            rows,
            cols,
            prec,
            data: vec![MPComplex::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: Precision) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = MPComplex::one(prec);
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        prec: Precision,
        mut f: impl FnMut(usize, usize) -> MPComplex,
    ) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape {rows}x{cols}");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).with_precision(prec));
            }
        }
        MPMatrix { rows, cols, prec, data }
    }

    /// Builds a matrix from row-major entries; the precision is the largest
    /// among them.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<MPComplex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let prec = data.iter().map(MPComplex::precision).max().unwrap();
        let data = data
            .into_iter()
            .map(|z| if z.precision() == prec { z } else { z.with_precision(prec) })
            .collect();
        Ok(MPMatrix { rows, cols, prec, data })
    }

    pub fn diagonal(entries: &[MPComplex]) -> Self {
        let prec = entries.iter().map(MPComplex::precision).max().expect("empty diagonal");
        let n = entries.len();
        let mut m = Self::zeros(n, n, prec);
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = z.with_precision(prec);
        }
        m
    }

    pub fn real_diagonal(entries: &[MPReal]) -> Self {
        let v: Vec<MPComplex> = entries.iter().cloned().map(MPComplex::from_real).collect();
        Self::diagonal(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Every entry rounded to `prec`.
    pub fn with_precision(&self, prec: Precision) -> MPMatrix {
        MPMatrix {
            rows: self.rows,
            cols: self.cols,
            prec,
            data: self.data.iter().map(|z| z.with_precision(prec)).collect(),
        }
    }

    pub fn as_slice(&self) -> &[MPComplex] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<MPComplex> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&MPComplex> {
        self.check_index(i, j)?;
        Ok(&self.data[i * self.cols + j])
    }

    pub fn set(&mut self, value: MPComplex, i: usize, j: usize) -> Result<()> {
        self.check_index(i, j)?;
        self.data[i * self.cols + j] = value.with_precision(self.prec);
        Ok(())
    }

    fn check_index(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[MPComplex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<MPComplex> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    fn combined_precision(&self, other: &MPMatrix) -> Precision {
        self.prec.max(other.prec)
    }

    pub fn matmul(&self, other: &MPMatrix) -> Result<MPMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let prec = self.combined_precision(other);
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..other.cols {
                data.push(dot(prec, || {
                    row.iter()
                        .enumerate()
                        .map(move |(k, a)| (a, &other.data[k * other.cols + j]))
                }));
            }
        }
        Ok(MPMatrix {
            rows: self.rows,
            cols: other.cols,
            prec,
            data,
        })
    }

    fn zip_with(
        &self,
        other: &MPMatrix,
        what: &str,
        f: impl Fn(&MPComplex, &MPComplex) -> MPComplex,
    ) -> Result<MPMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot {what} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let prec = self.combined_precision(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(MPMatrix {
            rows: self.rows,
            cols: self.cols,
            prec,
            data,
        })
    }

    pub fn add(&self, other: &MPMatrix) -> Result<MPMatrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &MPMatrix) -> Result<MPMatrix> {
        self.zip_with(other, "subtract", |a, b| a - b)
    }

    pub fn scale(&self, k: &MPComplex) -> MPMatrix {
        self.map(|z| z * k)
    }

    pub fn scale_real(&self, k: &MPReal) -> MPMatrix {
        self.map(|z| z.scale(k))
    }

    pub fn map(&self, f: impl Fn(&MPComplex) -> MPComplex) -> MPMatrix {
        MPMatrix {
            rows: self.rows,
            cols: self.cols,
            prec: self.prec,
            data: self.data.iter().map(|z| f(z).with_precision(self.prec)).collect(),
        }
    }

    pub fn adjoint(&self) -> MPMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        MPMatrix {
            rows: self.cols,
            cols: self.rows,
            prec: self.prec,
            data,
        }
    }

    pub fn transpose(&self) -> MPMatrix {
        MPMatrix::from_fn(self.cols, self.rows, self.prec, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> Result<MPComplex> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "trace of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut acc = MPComplex::zero(self.prec);
        for i in 0..self.rows {
            acc += &self[(i, i)];
        }
        Ok(acc)
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i][j] · other`.
    pub fn tensorprod(&self, other: &MPMatrix) -> MPMatrix {
        let prec = self.combined_precision(other);
        let (r2, c2) = other.shape();
        MPMatrix::from_fn(self.rows * r2, self.cols * c2, prec, |i, j| {
            &self[(i / r2, j / c2)] * &other[(i % r2, j % c2)]
        })
    }

    /// Reduced matrix of the qubits in `keep` (strictly increasing). Qubit 0
    /// is the most significant bit of the basis index.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<MPMatrix> {
        let n = qubit_count(self.rows).filter(|_| self.is_square()).ok_or_else(|| {
            Error::DimensionMismatch(format!(
                "partial trace needs a 2^n x 2^n matrix, got {}x{}",
                self.rows, self.cols
            ))
        })?;
        validate_subset(keep, n)?;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let spread = |bits: usize, qubits: &[usize]| -> usize {
            let k = qubits.len();
            qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
                let bit = (bits >> (k - 1 - pos)) & 1;
                acc | (bit << (n - 1 - q))
            })
        };
        let dim = 1usize << keep.len();
        let env = 1usize << traced.len();
        let mut out = MPMatrix::zeros(dim, dim, self.prec);
        for r in 0..dim {
            let rbase = spread(r, keep);
            for c in 0..dim {
                let cbase = spread(c, keep);
                let mut acc = MPComplex::zero(self.prec);
                for t in 0..env {
                    let toff = spread(t, &traced);
                    acc += &self[(rbase | toff, cbase | toff)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    /// `max |a_ij|`.
    pub fn max_abs(&self) -> MPReal {
        self.data
            .iter()
            .map(MPComplex::abs)
            .fold(MPReal::zero(self.prec), |m, x| m.max(&x))
    }

    pub fn frobenius_norm(&self) -> MPReal {
        norm_sqr(self.prec, self.data.iter()).sqrt()
    }

    /// `max |a_ij - conj(a_ji)|`; `None` for non-square matrices.
    pub fn hermiticity_deviation(&self) -> Option<MPReal> {
        if !self.is_square() {
            return None;
        }
        let mut dev = MPReal::zero(self.prec);
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max(&(&self[(i, j)] - &self[(j, i)].conj()).abs());
            }
        }
        Some(dev)
    }

    /// Errors unless `‖A − A†‖_max ≤ 2^(−p+8)·‖A‖_max`.
    pub fn ensure_hermitian(&self) -> Result<()> {
        let dev = self.hermiticity_deviation().ok_or_else(|| {
            Error::NotHermitian(format!("non-square {}x{} matrix", self.rows, self.cols))
        })?;
        let tol = &self.prec.tolerance(8) * &self.max_abs();
        if dev > tol {
            return Err(Error::NotHermitian(dev.to_sci_string(6)));
        }
        Ok(())
    }

    /// `‖A†A − I‖_max`; `None` for non-square matrices.
    pub fn unitarity_deviation(&self) -> Option<MPReal> {
        if !self.is_square() {
            return None;
        }
        let gram = self.adjoint().matmul(self).ok()?;
        let id = MPMatrix::identity(self.rows, self.prec);
        Some(gram.sub(&id).ok()?.max_abs())
    }

    /// Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<MPMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let prec = self.prec;
        let floor = &prec.tolerance(16) * &self.max_abs();
        let mut a = self.clone();
        let mut inv = MPMatrix::identity(n, prec);
        for col in 0..n {
            let (pivot_row, pivot_abs) = (col..n)
                .map(|r| (r, a[(r, col)].abs()))
                .fold(None, |best: Option<(usize, MPReal)>, (r, v)| match best {
                    Some((_, ref bv)) if *bv >= v => best,
                    _ => Some((r, v)),
                })
                .unwrap();
            if pivot_abs.is_zero() || pivot_abs <= floor {
                return Err(Error::Singular);
            }
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            let pivot_inv = MPComplex::one(prec).checked_div(&a[(col, col)])?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &pivot_inv;
                inv[(col, j)] = &inv[(col, j)] * &pivot_inv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let da = &factor * &a[(col, j)];
                    a[(r, j)] -= &da;
                    let di = &factor * &inv[(col, j)];
                    inv[(r, j)] -= &di;
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// One row per line, entries `(re,im)` separated by single spaces.
    pub fn to_text(&self, digits: usize) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|z| z.to_sci_string(digits)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`MPMatrix::to_text`].
    pub fn parse_text(text: &str, prec: Precision) -> Result<MPMatrix> {
        let mut rows = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let row = line
                .split_whitespace()
                .map(|tok| parse_complex_token(tok, prec))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix text".into()));
        }
        let nrows = rows.len();
        MPMatrix::from_vec(nrows, cols, rows.into_iter().flatten().collect())
    }
}

/// Parses `(re,im)` or `re,im`.
pub fn parse_complex_token(tok: &str, prec: Precision) -> Result<MPComplex> {
    let inner = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(tok);
    let (re, im) = inner.split_once(',').ok_or_else(|| Error::Parse(tok.to_string()))?;
    MPComplex::parse_parts(re, im, prec)
}

/// `log2(dim)` when `dim` is a power of two.
pub(crate) fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

pub(crate) fn validate_subset(qubits: &[usize], n: usize) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::InvalidQubits("empty qubit selection".into()));
    }
    if qubits.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidQubits(format!("{qubits:?} is not strictly increasing")));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::InvalidQubits(format!("qubit {q} out of range for {n} qubits")));
    }
    Ok(())
}

impl Index<(usize, usize)> for MPMatrix {
    type Output = MPComplex;
    fn index(&self, (i, j): (usize, usize)) -> &MPComplex {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MPMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MPComplex {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for MPMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(output_digits);
        f.write_str(self.to_text(digits).trim_end())
    }
}

impl fmt::Debug for MPMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MPMatrix {}x{} @ {}", self.rows, self.cols, self.prec)?;
        f.write_str(&self.to_text(12))
    }
}

/// Pauli and other small constant matrices.
pub mod consts {
    use super::MPMatrix;
    use crate::precision::{MPComplex, MPReal, Precision};

    fn real2(prec: Precision, entries: [i64; 4]) -> MPMatrix {
        MPMatrix::from_fn(2, 2, prec, |i, j| {
            MPComplex::from_real(MPReal::from_i64(entries[2 * i + j], prec))
        })
    }

    pub fn identity2(prec: Precision) -> MPMatrix {
        MPMatrix::identity(2, prec)
    }

    pub fn pauli_x(prec: Precision) -> MPMatrix {
        real2(prec, [0, 1, 1, 0])
    }

    pub fn pauli_y(prec: Precision) -> MPMatrix {
        let mut y = MPMatrix::zeros(2, 2, prec);
        y[(0, 1)] = MPComplex::from_f64(0.0, -1.0, prec);
        y[(1, 0)] = MPComplex::from_f64(0.0, 1.0, prec);
        y
    }

    pub fn pauli_z(prec: Precision) -> MPMatrix {
        real2(prec, [1, 0, 0, -1])
    }

    pub fn hadamard(prec: Precision) -> MPMatrix {
        let h = MPReal::from_ratio(1, 2, prec).sqrt();
        real2(prec, [1, 1, 1, -1]).scale_real(&h)
    }
}

#[cfg(test)]
mod tests {
    use super::consts::*;
    use super::*;

    fn p() -> Precision {
        Precision::new(280).unwrap()
    }

    fn r(x: i64) -> MPComplex {
        MPComplex::from_real(MPReal::from_i64(x, p()))
    }

    fn rdiag(xs: &[i64]) -> MPMatrix {
        MPMatrix::diagonal(&xs.iter().map(|&x| r(x)).collect::<Vec<_>>())
    }

    #[test]
    fn construct_set_get() {
        let m = MPMatrix::zeros(2, 2, p());
        assert!(m.as_slice().iter().all(MPComplex::is_zero));
        assert!(matches!(m.get(2, 0), Err(Error::IndexOutOfRange { .. })));
        let y = pauli_y(p());
        assert!(*y.get(0, 1).unwrap() == MPComplex::from_f64(0.0, -1.0, p()));
        assert!(*y.get(1, 0).unwrap() == MPComplex::from_f64(0.0, 1.0, p()));
        assert!(y.get(0, 0).unwrap().is_zero() && y.get(1, 1).unwrap().is_zero());
        assert!(MPMatrix::new(0, 3).is_err());
    }

    #[test]
    fn set_rounds_to_matrix_precision() {
        let mut m = MPMatrix::zeros(1, 1, Precision::new(64).unwrap());
        m.set(MPComplex::from_real(MPReal::from_ratio(1, 3, p())), 0, 0).unwrap();
        assert_eq!(m[(0, 0)].precision().bits(), 64);
    }

    #[test]
    fn y90_is_unitary() {
        let h = MPReal::from_ratio(1, 2, p()).sqrt();
        let mut y90 = MPMatrix::zeros(2, 2, p());
        y90.set(h.clone().into(), 0, 0).unwrap();
        y90.set(h.clone().into(), 0, 1).unwrap();
        y90.set((-&h).into(), 1, 0).unwrap();
        y90.set(h.into(), 1, 1).unwrap();
        let prod = y90.matmul(&y90.adjoint()).unwrap();
        let err = prod.sub(&MPMatrix::identity(2, p())).unwrap().max_abs();
        assert!(err <= MPReal::exp2(-270, p()));
    }

    #[test]
    fn trace_adjoint_and_mismatch() {
        assert!(pauli_y(p()).trace().unwrap().is_zero());
        let a = MPMatrix::from_fn(2, 3, p(), |i, j| MPComplex::from_f64(i as f64, j as f64 - 0.5, p()));
        assert!(a.adjoint().adjoint() == a);
        assert!(a.trace().is_err());
        assert!(a.matmul(&a).is_err());
        assert!(a.add(&a.adjoint()).is_err());
    }

    #[test]
    fn kronecker_of_diagonals() {
        let z = pauli_z(p());
        let i = identity2(p());
        assert!(z.tensorprod(&i) == rdiag(&[1, 1, -1, -1]));
        assert!(i.tensorprod(&z) == rdiag(&[1, -1, 1, -1]));
    }

    #[test]
    fn partial_trace_examples() {
        let half = MPComplex::from_real(MPReal::from_ratio(1, 2, p()));
        let mut bell = MPMatrix::zeros(4, 4, p());
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell[(i, j)] = half.clone();
        }
        let reduced = bell.partial_trace(&[0]).unwrap();
        assert!(reduced == MPMatrix::identity(2, p()).scale(&half));
        assert!(bell.partial_trace(&[0, 1]).unwrap() == bell);
        assert!(bell.partial_trace(&[1, 0]).is_err());
        assert!(bell.partial_trace(&[2]).is_err());
        assert!(bell.partial_trace(&[]).is_err());
        assert!(MPMatrix::zeros(3, 3, p()).partial_trace(&[0]).is_err());
    }

    #[test]
    fn partial_trace_picks_the_right_factor() {
        // rho_a = |0><0|, rho_b = |1><1|, rho_c = |+><+|
        let zero = rdiag(&[1, 0]);
        let one = rdiag(&[0, 1]);
        let plus = MPMatrix::from_fn(2, 2, p(), |_, _| MPComplex::from_f64(0.5, 0.0, p()));
        let rho = zero.tensorprod(&one).tensorprod(&plus);
        assert!(rho.partial_trace(&[0]).unwrap() == zero);
        assert!(rho.partial_trace(&[1]).unwrap() == one);
        assert!(rho.partial_trace(&[2]).unwrap() == plus);
        assert!(rho.partial_trace(&[0, 2]).unwrap() == zero.tensorprod(&plus));
    }

    #[test]
    fn inverse_examples() {
        let id = MPMatrix::identity(3, p());
        assert!(id.inverse().unwrap() == id);
        let d = rdiag(&[2, 4]);
        let expected = MPMatrix::diagonal(&[
            MPComplex::from_f64(0.5, 0.0, p()),
            MPComplex::from_f64(0.25, 0.0, p()),
        ]);
        assert!(d.inverse().unwrap() == expected);
        assert_eq!(rdiag(&[1, 0]).inverse(), Err(Error::Singular));
        let m = MPMatrix::from_fn(3, 3, p(), |i, j| MPComplex::from_f64((i * 3 + j) as f64, (i + 2 * j) as f64 * 0.25, p()));
        let m = m.add(&MPMatrix::identity(3, p())).unwrap();
        let prod = m.matmul(&m.inverse().unwrap()).unwrap();
        assert!(prod.sub(&id).unwrap().max_abs() <= p().tolerance(16));
    }

    #[test]
    fn text_round_trip() {
        let m = MPMatrix::from_fn(2, 3, p(), |i, j| MPComplex::from_f64(i as f64 + 0.25, -(j as f64), p()));
        let text = m.to_text(8);
        assert_eq!(text.lines().next().unwrap(), "(2.5000000e-01,0.0000000e+00) (2.5000000e-01,-1.0000000e+00) (2.5000000e-01,-2.0000000e+00)");
        assert!(MPMatrix::parse_text(&text, p()).unwrap() == m);
        assert!(MPMatrix::parse_text("(1,0) (2,0)\n(3,0)", p()).is_err());
    }

    #[test]
    fn hermiticity_checks() {
        assert!(pauli_y(p()).ensure_hermitian().is_ok());
        let mut m = pauli_y(p());
        m[(0, 1)] = MPComplex::from_f64(0.0, 1.0, p());
        assert!(matches!(m.ensure_hermitian(), Err(Error::NotHermitian(_))));
        assert!(MPMatrix::zeros(2, 3, p()).ensure_hermitian().is_err());
    }
}
