//! Sampled series and the discrete Fourier transform.

use super::MPMatrix;
use crate::error::{Error, Result};
use crate::precision::{MPComplex, MPReal, Precision};

/// A 1×N row of samples with a uniform step (seconds for time series, Hz for
/// spectra).
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub values: Vec<MPComplex>,
    pub step: MPReal,
}

impl Series {
    pub fn new(values: Vec<MPComplex>, step: MPReal) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one sample".into()));
        }
        Ok(Series { values, step })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn precision(&self) -> Precision {
        self.values.iter().map(MPComplex::precision).max().unwrap_or_default()
    }

    /// The samples as a 1×N matrix.
    pub fn to_row(&self) -> MPMatrix {
        MPMatrix::from_vec(1, self.values.len(), self.values.clone()).expect("non-empty series")
    }

    pub fn from_row(row: &MPMatrix, step: MPReal) -> Result<Self> {
        if row.rows() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected a 1xN row, got {}x{}",
                row.rows(),
                row.cols()
            )));
        }
        Series::new(row.as_slice().to_vec(), step)
    }
}

/// Unnormalized forward transform `X[k] = Σ_j x[j]·e^(−2πi·jk/N)`.
///
/// The output step is the bin width `1/(N·step)` (zero when the input step
/// is zero). Power-of-two lengths use an iterative radix-2 FFT.
pub fn dft(x: &Series) -> Series {
    let n = x.len();
    let prec = x.precision();
    let values = if n.is_power_of_two() {
        fft_radix2(&x.values, prec)
    } else {
        naive_dft(&x.values, prec)
    };
    let step = if x.step.is_zero() {
        MPReal::zero(prec)
    } else {
        (&MPReal::from_i64(n as i64, prec) * &x.step).recip()
    };
    Series { values, step }
}

/// `e^(−2πi·k/n)` for `k` in `0..count`.
fn twiddles(n: usize, count: usize, prec: Precision) -> Vec<MPComplex> {
    let base = MPReal::pi(prec).mul_exp2(1) / MPReal::from_i64(n as i64, prec);
    (0..count)
        .map(|k| MPComplex::cis(&-(&base * &MPReal::from_i64(k as i64, prec))))
        .collect()
}

fn naive_dft(x: &[MPComplex], prec: Precision) -> Vec<MPComplex> {
    let n = x.len();
    let w = twiddles(n, n, prec);
    (0..n)
        .map(|k| {
            let mut acc = MPComplex::zero(prec);
            for (j, xj) in x.iter().enumerate() {
                acc.mul_add_assign(xj, &w[(j * k) % n]);
            }
            acc
        })
        .collect()
}

fn fft_radix2(x: &[MPComplex], prec: Precision) -> Vec<MPComplex> {
    let n = x.len();
    let bits = n.trailing_zeros();
    let mut a: Vec<MPComplex> = vec![MPComplex::zero(prec); n];
    for (i, xi) in x.iter().enumerate() {
        let j = if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) };
        a[j] = xi.with_precision(prec);
    }
    let w = twiddles(n, n / 2, prec);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let t = &w[k * stride] * &a[start + k + half];
                let u = a[start + k].clone();
                a[start + k + half] = &u - &t;
                a[start + k] = &u + &t;
            }
        }
        len <<= 1;
    }
    a
}

/// Elementwise modulus, returned as real-valued complex samples.
pub fn abs_elementwise(x: &Series) -> Series {
    Series {
        values: x.values.iter().map(|z| MPComplex::from_real(z.abs())).collect(),
        step: x.step.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(280).unwrap()
    }

    fn series(xs: &[f64]) -> Series {
        Series::new(
            xs.iter().map(|&x| MPComplex::from_f64(x, 0.0, p())).collect(),
            MPReal::one(p()),
        )
        .unwrap()
    }

    fn close(a: &Series, b: &[f64]) -> bool {
        a.values
            .iter()
            .zip(b)
            .all(|(z, &w)| (z - &MPComplex::from_f64(w, 0.0, p())).abs() <= p().tolerance(8))
    }

    #[test]
    fn impulse_and_constant() {
        assert!(close(&dft(&series(&[1.0, 1.0, 1.0, 1.0])), &[4.0, 0.0, 0.0, 0.0]));
        assert!(close(&dft(&series(&[1.0, 0.0, 0.0, 0.0])), &[1.0, 1.0, 1.0, 1.0]));
        assert!(close(&dft(&series(&[1.0, 1.0, 1.0])), &[3.0, 0.0, 0.0]));
        assert!(close(&dft(&series(&[2.5])), &[2.5]));
    }

    #[test]
    fn radix2_matches_naive() {
        let x: Vec<MPComplex> = (0..16)
            .map(|k| MPComplex::from_f64((k * k % 7) as f64 - 3.0, (k % 5) as f64 * 0.5, p()))
            .collect();
        let fast = fft_radix2(&x, p());
        let slow = naive_dft(&x, p());
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() <= p().tolerance(12));
        }
    }

    #[test]
    fn bin_width_and_abs() {
        let x = Series::new(vec![MPComplex::zero(p()); 8], MPReal::from_ratio(1, 4, p())).unwrap();
        assert!(dft(&x).step == MPReal::from_ratio(1, 2, p()));
        let y = Series::new(
            vec![MPComplex::from_f64(3.0, 4.0, p()), MPComplex::from_f64(0.0, -1.0, p())],
            MPReal::one(p()),
        )
        .unwrap();
        assert!(close(&abs_elementwise(&y), &[5.0, 1.0]));
        assert!(Series::new(Vec::new(), MPReal::one(p())).is_err());
    }
}
