//! C interface to `mpqc`.
//!
//! Every function returns an [`MpqcStatus`]; results come back through out
//! pointers. Matrices and MPS states are opaque handles owned by the caller
//! and released with their `_free` function. Strings returned by the library
//! must be released with [`mpqc_string_free`]. After a non-OK status,
//! [`mpqc_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mpqc::cli::{parse_circuit_with, run_circuit, Overrides, DEFAULT_DIGITS};
use mpqc::mps::{default_truncation, format_density, Gate, MPSState};
use mpqc::nmr::{self, FidOptions, SpinSystemParams};
use mpqc::{Error, MPComplex, MPMatrix, MPReal, Precision};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpqcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidPrecision = 3,
    Parse = 4,
    IndexOutOfRange = 5,
    DimensionMismatch = 6,
    NotHermitian = 7,
    NotUnitary = 8,
    Singular = 9,
    NoConvergence = 10,
    InvalidQubits = 11,
    CorruptedState = 12,
    Circuit = 13,
    Io = 14,
    Panic = 15,
}

/// Opaque complex matrix.
pub struct MpqcMatrix(MPMatrix);

/// Opaque matrix-product state.
pub struct MpqcState(MPSState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MpqcStatus {
    match err {
        Error::InvalidPrecision(_) | Error::InvalidDigits(_) => MpqcStatus::InvalidPrecision,
        Error::Parse(_) => MpqcStatus::Parse,
        Error::DivisionByZero | Error::InvalidArgument(_) => MpqcStatus::InvalidArgument,
        Error::IndexOutOfRange { .. } => MpqcStatus::IndexOutOfRange,
        Error::DimensionMismatch(_) => MpqcStatus::DimensionMismatch,
        Error::NotHermitian(_) => MpqcStatus::NotHermitian,
        Error::NotUnitary(_) => MpqcStatus::NotUnitary,
        Error::Singular => MpqcStatus::Singular,
        Error::NoConvergence(_) => MpqcStatus::NoConvergence,
        Error::InvalidQubits(_) => MpqcStatus::InvalidQubits,
        Error::CorruptedState(_) => MpqcStatus::CorruptedState,
        Error::Circuit { .. } => MpqcStatus::Circuit,
        Error::Io(_) => MpqcStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Outcome) -> MpqcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MpqcStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer passed as `{what}`"));
            MpqcStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            MpqcStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Core(Error::InvalidArgument(format!("`{what}` is not valid UTF-8"))))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &'static str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn slice_arg<'a>(p: *const usize, len: usize, what: &'static str) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Outcome {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// `0` selects the ambient precision.
fn precision_arg(bits: u64) -> Result<Precision, Error> {
    if bits == 0 {
        Ok(Precision::ambient())
    } else {
        Precision::new(bits)
    }
}

/// Copies the calling thread's last error message into a new string, or
/// writes NULL when there is none.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_last_error(out: *mut *mut c_char) -> MpqcStatus {
    if out.is_null() {
        return MpqcStatus::NullPointer;
    }
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    out.write(msg.map_or(ptr::null_mut(), CString::into_raw));
    MpqcStatus::Ok
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpqc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn mpqc_set_default_precision(bits: u64) -> MpqcStatus {
    guard(|| Ok(mpqc::precision::set_default_precision(bits)?))
}

#[no_mangle]
pub extern "C" fn mpqc_default_precision() -> u64 {
    u64::from(mpqc::precision::default_precision().bits())
}

#[no_mangle]
pub extern "C" fn mpqc_set_output_digits(digits: usize) -> MpqcStatus {
    guard(|| Ok(mpqc::precision::set_output_digits(digits)?))
}

/// Creates a `rows × cols` zero matrix. `prec_bits = 0` uses the ambient
/// precision.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_new(
    rows: usize,
    cols: usize,
    prec_bits: u64,
    out: *mut *mut MpqcMatrix,
) -> MpqcStatus {
    guard(|| {
        let prec = precision_arg(prec_bits)?;
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!("matrix dimensions must be positive, got {rows}x{cols}")).into());
        }
        let m = Box::new(MpqcMatrix(MPMatrix::zeros(rows, cols, prec)));
        write_out(out, Box::into_raw(m), "out")
    })
}

/// # Safety
/// `m` must be NULL or a matrix handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_free(m: *mut MpqcMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live matrix handle; `rows` and `cols` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_shape(m: *const MpqcMatrix, rows: *mut usize, cols: *mut usize) -> MpqcStatus {
    guard(|| {
        let m = handle(m, "m")?;
        write_out(rows, m.0.rows(), "rows")?;
        write_out(cols, m.0.cols(), "cols")
    })
}

/// Sets entry `(i, j)` from decimal strings, rounded to the matrix precision.
///
/// # Safety
/// `m` must be a live matrix handle; `re` and `im` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_set(
    m: *mut MpqcMatrix,
    i: usize,
    j: usize,
    re: *const c_char,
    im: *const c_char,
) -> MpqcStatus {
    guard(|| {
        let m = handle_mut(m, "m")?;
        let z = MPComplex::parse_parts(str_arg(re, "re")?, str_arg(im, "im")?, m.0.precision())?;
        m.0.set(z, i, j)?;
        Ok(())
    })
}

/// Entry `(i, j)` rounded to doubles.
///
/// # Safety
/// `m` must be a live matrix handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_get(
    m: *const MpqcMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> MpqcStatus {
    guard(|| {
        let z = handle(m, "m")?.0.get(i, j)?;
        write_out(re, z.re().to_f64(), "re")?;
        write_out(im, z.im().to_f64(), "im")
    })
}

/// Entry `(i, j)` as `"(re,im)"` in scientific notation.
///
/// # Safety
/// `m` must be a live matrix handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_get_string(
    m: *const MpqcMatrix,
    i: usize,
    j: usize,
    digits: usize,
    out: *mut *mut c_char,
) -> MpqcStatus {
    guard(|| {
        if digits == 0 {
            return Err(Error::InvalidDigits(0).into());
        }
        let z = handle(m, "m")?.0.get(i, j)?;
        write_out(out, into_c_string(z.to_sci_string(digits)), "out")
    })
}

/// The whole matrix, one row per line.
///
/// # Safety
/// `m` must be a live matrix handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_to_text(m: *const MpqcMatrix, digits: usize, out: *mut *mut c_char) -> MpqcStatus {
    guard(|| {
        if digits == 0 {
            return Err(Error::InvalidDigits(0).into());
        }
        let m = handle(m, "m")?;
        write_out(out, into_c_string(m.0.to_text(digits)), "out")
    })
}

/// A density matrix in `coeff|ket><bra|` notation.
///
/// # Safety
/// `m` must be a live matrix handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_matrix_format_density(
    m: *const MpqcMatrix,
    digits: usize,
    out: *mut *mut c_char,
) -> MpqcStatus {
    guard(|| {
        if digits == 0 {
            return Err(Error::InvalidDigits(0).into());
        }
        let m = handle(m, "m")?;
        write_out(out, into_c_string(format_density(&m.0, digits)), "out")
    })
}

/// Creates `|0…0⟩` on `n` qubits. `prec_bits = 0` uses the ambient
/// precision, a NULL `trunc` the default threshold `2^(−p/2)`, and
/// `max_bond = 0` no bond cap.
///
/// # Safety
/// `trunc` must be NULL or a NUL-terminated string; `out` valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_new(
    n: usize,
    prec_bits: u64,
    trunc: *const c_char,
    max_bond: usize,
    out: *mut *mut MpqcState,
) -> MpqcStatus {
    guard(|| {
        let prec = precision_arg(prec_bits)?;
        let eps = match opt_str_arg(trunc, "trunc")? {
            Some(t) => MPReal::parse_with_prec(t, prec)?,
            None => default_truncation(prec),
        };
        let cap = (max_bond > 0).then_some(max_bond);
        let s = MPSState::with_options(n, prec, eps, cap)?;
        write_out(out, Box::into_raw(Box::new(MpqcState(s))), "out")
    })
}

/// # Safety
/// `s` must be NULL or a state handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_free(s: *mut MpqcState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Applies a `2^k × 2^k` unitary to `k` target qubits; the first target is
/// the most significant bit of the matrix index.
///
/// # Safety
/// `s` and `u` must be live handles; `targets` must point to `count` values.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_apply(
    s: *mut MpqcState,
    u: *const MpqcMatrix,
    targets: *const usize,
    count: usize,
) -> MpqcStatus {
    guard(|| {
        let s = handle_mut(s, "s")?;
        let u = handle(u, "u")?;
        let targets = slice_arg(targets, count, "targets")?;
        let prec = s.0.precision();
        let gate = Gate::new(u.0.with_precision(prec), targets)?;
        Ok(s.0.apply_gate(&gate)?)
    })
}

/// Applies a named gate: H, X, Y, Z, S, T, CNOT, CZ, SWAP or TOFFOLI.
///
/// # Safety
/// `s` must be a live handle; `name` a NUL-terminated string; `targets`
/// must point to `count` values.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_apply_named(
    s: *mut MpqcState,
    name: *const c_char,
    targets: *const usize,
    count: usize,
) -> MpqcStatus {
    guard(|| {
        let s = handle_mut(s, "s")?;
        let name = str_arg(name, "name")?.to_ascii_uppercase();
        let t = slice_arg(targets, count, "targets")?;
        let p = s.0.precision();
        let want = |k: usize| -> Result<(), Error> {
            if t.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidQubits(format!("{name} takes {k} targets, got {}", t.len())))
            }
        };
        let gate = match name.as_str() {
            "H" | "X" | "Y" | "Z" | "S" | "T" => {
                want(1)?;
                match name.as_str() {
                    "H" => Gate::h(t[0], p),
                    "X" => Gate::x(t[0], p),
                    "Y" => Gate::y(t[0], p),
                    "Z" => Gate::z(t[0], p),
                    "S" => Gate::s(t[0], p),
                    _ => Gate::t(t[0], p),
                }
            }
            "CNOT" => {
                want(2)?;
                Gate::cnot(t[0], t[1], p)?
            }
            "CZ" => {
                want(2)?;
                Gate::cz(t[0], t[1], p)?
            }
            "SWAP" => {
                want(2)?;
                Gate::swap(t[0], t[1], p)?
            }
            "TOFFOLI" => {
                want(3)?;
                Gate::toffoli(t[0], t[1], t[2], p)?
            }
            _ => return Err(Error::InvalidArgument(format!("unknown gate `{name}`")).into()),
        };
        Ok(s.0.apply_gate(&gate)?)
    })
}

/// Reduced density matrix of the strictly increasing qubit list.
///
/// # Safety
/// `s` must be a live handle; `qubits` must point to `count` values; `out`
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_rdo(
    s: *const MpqcState,
    qubits: *const usize,
    count: usize,
    out: *mut *mut MpqcMatrix,
) -> MpqcStatus {
    guard(|| {
        let s = handle(s, "s")?;
        let qs = slice_arg(qubits, count, "qubits")?;
        let rho = s.0.rdo(qs)?;
        write_out(out, Box::into_raw(Box::new(MpqcMatrix(rho))), "out")
    })
}

/// Reduced density matrix of qubits `a..=b`.
///
/// # Safety
/// `s` must be a live handle; `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_rdo_block(
    s: *const MpqcState,
    a: usize,
    b: usize,
    out: *mut *mut MpqcMatrix,
) -> MpqcStatus {
    guard(|| {
        let rho = handle(s, "s")?.0.rdo_block(a, b)?;
        write_out(out, Box::into_raw(Box::new(MpqcMatrix(rho))), "out")
    })
}

/// # Safety
/// `s` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_state_max_bond_dimension(s: *const MpqcState, out: *mut usize) -> MpqcStatus {
    guard(|| {
        let m = handle(s, "s")?.0.max_bond_dimension();
        write_out(out, m, "out")
    })
}

/// Runs a circuit description and returns everything its queries print.
/// `prec_bits = 0` and a NULL `trunc` defer to the file's directives.
///
/// # Safety
/// `text` must be a NUL-terminated string, `trunc` NULL or one; `out`
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_run_circuit(
    text: *const c_char,
    prec_bits: u64,
    trunc: *const c_char,
    digits: usize,
    out: *mut *mut c_char,
) -> MpqcStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let overrides = Overrides {
            prec: if prec_bits == 0 { None } else { Some(Precision::new(prec_bits)?) },
            trunc: opt_str_arg(trunc, "trunc")?.map(str::to_owned),
        };
        let digits = if digits == 0 { DEFAULT_DIGITS } else { digits };
        let prog = parse_circuit_with(text, &overrides)?;
        let mut buf = Vec::new();
        run_circuit(&prog, &mut buf, digits)?;
        let s = String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))?;
        write_out(out, into_c_string(s), "out")
    })
}

/// Simulates the two-spin FID and writes the magnitude spectrum as gnuplot
/// data to `path`. Frequencies are in Hz and temperature in kelvin, all
/// given as decimal strings. A NULL `dt_factor` means 0.145 and
/// `samples = 0` derives the record length from the J coupling.
///
/// # Safety
/// All string arguments must be NUL-terminated (`dt_factor` may be NULL);
/// `bins` must be NULL or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mpqc_nmr_write_spectrum(
    w1: *const c_char,
    w2: *const c_char,
    j12: *const c_char,
    temperature: *const c_char,
    dt_factor: *const c_char,
    samples: usize,
    prec_bits: u64,
    digits: usize,
    path: *const c_char,
    bins: *mut usize,
) -> MpqcStatus {
    guard(|| {
        let prec = precision_arg(prec_bits)?;
        let params = SpinSystemParams::from_strs(
            str_arg(w1, "w1")?,
            str_arg(w2, "w2")?,
            str_arg(j12, "j12")?,
            str_arg(temperature, "temperature")?,
            prec,
        )?;
        let mut opts = FidOptions::standard(prec);
        if let Some(f) = opt_str_arg(dt_factor, "dt_factor")? {
            opts.dt_factor = MPReal::parse_with_prec(f, prec)?;
        }
        opts.samples = (samples > 0).then_some(samples);
        let digits = if digits == 0 { DEFAULT_DIGITS } else { digits };
        let path = Path::new(str_arg(path, "path")?);
        let run = nmr::run_fid_with(&params, &opts)?;
        mpqc::cli::gp_1d_print(&run.spectrum, &run.spectrum.step, 1, path, digits)?;
        if !bins.is_null() {
            bins.write(run.spectrum.len());
        }
        Ok(())
    })
}
