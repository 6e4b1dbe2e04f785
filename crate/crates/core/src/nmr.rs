//! Free-induction-decay simulation of a heteronuclear two-spin system
//! (proton and carbon-13) at arbitrary temperature.
//!
//! The pipeline prepares the exact thermal state, tilts the proton with an
//! ideal 90° pulse about Y, records `⟨X₁⟩` under free evolution, zero-pads
//! the record to twice its length and returns the magnitude spectrum.

use crate::error::{Error, Result};
use crate::matrix::{abs_elementwise, consts, dft, exp_hermitian, unitary_evolution, MPMatrix, Series};
use crate::precision::{MPComplex, MPReal, Precision};

pub const BOLTZMANN: &str = "1.3806504e-23";
pub const PLANCK: &str = "6.62606896e-34";
pub const DEFAULT_DT_FACTOR: &str = "0.145";

/// Frequencies in Hz, temperature in kelvin.
#[derive(Clone, Debug)]
pub struct SpinSystemParams {
    pub w1: MPReal,
    pub w2: MPReal,
    pub j12: MPReal,
    pub temperature: MPReal,
    pub kb: MPReal,
    pub h: MPReal,
}

impl SpinSystemParams {
    /// Proton at 400 MHz, carbon at 125 MHz, J = 140 kHz, 300 K.
    pub fn standard(prec: Precision) -> Self {
        Self::from_strs("4e8", "1.25e8", "1.4e5", "300", prec).expect("valid literals")
    }

    /// Parses every physical input from decimal text so no binary rounding
    /// happens before the working precision is known.
    pub fn from_strs(w1: &str, w2: &str, j12: &str, temperature: &str, prec: Precision) -> Result<Self> {
        let parse = |s: &str| MPReal::parse_with_prec(s, prec);
        Ok(SpinSystemParams {
            w1: parse(w1)?,
            w2: parse(w2)?,
            j12: parse(j12)?,
            temperature: parse(temperature)?,
            kb: parse(BOLTZMANN)?,
            h: parse(PLANCK)?,
        })
    }

    pub fn precision(&self) -> Precision {
        self.w1.precision()
    }
}

/// Sampling controls. `samples` overrides the record length that is
/// otherwise derived from the J coupling, which is required when J = 0.
#[derive(Clone, Debug)]
pub struct FidOptions {
    pub dt_factor: MPReal,
    pub samples: Option<usize>,
}

impl FidOptions {
    pub fn standard(prec: Precision) -> Self {
        FidOptions {
            dt_factor: MPReal::parse_with_prec(DEFAULT_DT_FACTOR, prec).expect("valid literal"),
            samples: None,
        }
    }
}

/// `H = w1·Z⊗I + w2·I⊗Z + J12·Z⊗Z`, in Hz.
pub fn build_hamiltonian(p: &SpinSystemParams) -> MPMatrix {
    let (w1, w2, j) = (&p.w1, &p.w2, &p.j12);
    let diag = [
        &(w1 + w2) + j,
        &(w1 - w2) - j,
        &(w2 - w1) - j,
        &(-(w1 + w2)) + j,
    ];
    MPMatrix::real_diagonal(&diag)
}

/// `exp(−βH)/tr(exp(−βH))` with `β = h/(kB·T)`.
///
/// The exponent is shifted by its largest eigenvalue before exponentiating,
/// so the result stays representable at any temperature.
pub fn thermal_state(h: &MPMatrix, p: &SpinSystemParams) -> Result<MPMatrix> {
    if !p.temperature.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {}",
            p.temperature
        )));
    }
    let prec = h.precision();
    let beta = &p.h / &(&p.kb * &p.temperature);
    let exponent = h.scale_real(&-beta);
    let top = crate::matrix::eig_hermitian(&exponent)?.values[0].clone();
    let shifted = exponent.sub(&MPMatrix::identity(h.rows(), prec).scale_real(&top))?;
    let rho = exp_hermitian(&shifted)?;
    let tr = rho.trace()?.re().clone();
    Ok(rho.map(|z| z.div_real(&tr)))
}

/// `[[√½, √½], [−√½, √½]] ⊗ I`.
pub fn y90_pulse_on_proton(prec: Precision) -> MPMatrix {
    let r = MPReal::from_ratio(1, 2, prec).sqrt();
    let y = MPMatrix::from_fn(2, 2, prec, |i, j| {
        let v = if i == 1 && j == 0 { -r.clone() } else { r.clone() };
        MPComplex::from_real(v)
    });
    y.tensorprod(&consts::identity2(prec))
}

/// `tr(obs·ρ_k)` for `ρ_{k+1} = U ρ_k U†`, `U = exp(−2πi·H·dt)`.
pub fn rec_evol(rho: &MPMatrix, h: &MPMatrix, obs: &MPMatrix, dt: &MPReal, n: usize) -> Result<Series> {
    let d = rho.rows();
    if !rho.is_square() || h.shape() != (d, d) || obs.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "rho {:?}, H {:?} and observable {:?} must be square and equal",
            rho.shape(),
            h.shape(),
            obs.shape()
        )));
    }
    if !dt.is_positive() {
        return Err(Error::InvalidArgument("time step must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let u = unitary_evolution(h, dt)?;
    let u_adj = u.adjoint();
    let prec = rho.precision();
    let mut state = rho.clone();
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        values.push(trace_product(obs, &state, prec));
        if k + 1 < n {
            state = u.matmul(&state)?.matmul(&u_adj)?;
        }
    }
    Series::new(values, dt.clone())
}

/// `tr(A·B)` without forming the product.
fn trace_product(a: &MPMatrix, b: &MPMatrix, prec: Precision) -> MPComplex {
    let d = a.rows();
    crate::matrix::dot(prec, || (0..d).flat_map(move |i| (0..d).map(move |j| (&a[(i, j)], &b[(j, i)]))))
}

/// Smallest power of two `≥ x`.
pub fn unp2(x: &MPReal) -> Result<usize> {
    if !x.is_positive() || !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need a positive finite value, got {}",
            x.to_sci_string(6)
        )));
    }
    let mut n: usize = 1;
    let prec = x.precision();
    while MPReal::from_i64(n as i64, prec) < *x {
        n = n
            .checked_mul(2)
            .filter(|&n| n <= 1 << 40)
            .ok_or_else(|| Error::InvalidArgument(format!("{} needs too many samples", x.to_sci_string(6))))?;
    }
    Ok(n)
}

/// Appends zeros up to length `m`.
pub fn zero_padding(x: &Series, m: usize) -> Result<Series> {
    if m < x.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot pad {} samples down to {m}",
            x.len()
        )));
    }
    let prec = x.precision();
    let mut values = x.values.clone();
    values.resize(m, MPComplex::zero(prec));
    Series::new(values, x.step.clone())
}

/// The time-domain record and its spectrum.
#[derive(Clone, Debug)]
pub struct FidRun {
    pub dt: MPReal,
    pub samples: usize,
    pub signal: Series,
    pub spectrum: Series,
}

/// Magnitude spectrum for the standard sampling (`dt = 0.145/w1`).
pub fn run_fid(p: &SpinSystemParams) -> Result<Series> {
    Ok(run_fid_with(p, &FidOptions::standard(p.precision()))?.spectrum)
}

pub fn run_fid_with(p: &SpinSystemParams, opts: &FidOptions) -> Result<FidRun> {
    let prec = p.precision();
    if !p.w1.is_positive() {
        return Err(Error::InvalidArgument("proton frequency must be positive".into()));
    }
    if !opts.dt_factor.is_positive() {
        return Err(Error::InvalidArgument("time-step factor must be positive".into()));
    }
    let h = build_hamiltonian(p);
    let rho = thermal_state(&h, p)?;
    let pulse = y90_pulse_on_proton(prec);
    let rho = pulse.matmul(&rho)?.matmul(&pulse.adjoint())?;
    let dt = &opts.dt_factor / &p.w1;
    let n = match opts.samples {
        Some(0) => return Err(Error::InvalidArgument("need at least one sample".into())),
        Some(n) => n,
        None if p.j12.is_zero() => {
            return Err(Error::InvalidArgument(
                "record length cannot follow from a zero J coupling; give an explicit sample count".into(),
            ))
        }
        None => unp2(&(&dt * &p.j12.abs()).recip())?,
    };
    let x1 = consts::pauli_x(prec).tensorprod(&consts::identity2(prec));
    let record = rec_evol(&rho, &h, &x1, &dt, n)?;
    let signal = Series::new(
        record.values.iter().map(|z| MPComplex::from_real(z.re().clone())).collect(),
        record.step,
    )?;
    let padded = zero_padding(&signal, 2 * n)?;
    let spectrum = abs_elementwise(&dft(&padded));
    Ok(FidRun {
        dt,
        samples: n,
        signal,
        spectrum,
    })
}
