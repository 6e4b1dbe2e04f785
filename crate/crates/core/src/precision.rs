//! Arbitrary-precision real and complex scalars.
//!
//! Every value carries the binary precision it was created with. The
//! ambient precision (see [`set_default_precision`]) is consulted only by
//! constructors that do not take an explicit [`Precision`]; changing it never
//! alters values that already exist. All roundings are to nearest, ties to
//! even.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign, Div};
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use rug::float::{Constant, Round};
use rug::Float;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_OUTPUT_DIGITS: usize = 6;
const MAX_PRECISION_BITS: u64 = 1 << 24;

static AMBIENT_PRECISION: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);
static OUTPUT_DIGITS: AtomicUsize = AtomicUsize::new(DEFAULT_OUTPUT_DIGITS);

/// Number of mantissa bits of a floating-point value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub fn new(bits: u64) -> Result<Self> {
        if !(2..=MAX_PRECISION_BITS).contains(&bits) {
            return Err(Error::InvalidPrecision(bits));
        }
        Ok(Precision(bits as u32))
    }

    /// The current process-wide default.
    pub fn ambient() -> Self {
        Precision(AMBIENT_PRECISION.load(Ordering::Relaxed))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `2^(slack - bits)`, the usual shape of a tolerance at this precision.
    pub fn tolerance(self, slack: i32) -> MPReal {
        MPReal::exp2(slack - self.0 as i32, self)
    }

    /// Significant decimal digits that make a print/parse cycle lossless.
    pub fn round_trip_digits(self) -> usize {
        (self.0 as f64 * 0.302).ceil() as usize + 2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_PRECISION_BITS)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Sets the precision used by values created afterwards without an explicit
/// precision. Meant to be called once during single-threaded startup.
pub fn set_default_precision(bits: u64) -> Result<()> {
    let prec = Precision::new(bits)?;
    AMBIENT_PRECISION.store(prec.0, Ordering::Relaxed);
    Ok(())
}

pub fn default_precision() -> Precision {
    Precision::ambient()
}

/// Sets the number of significant digits used by every printer in the crate.
pub fn set_output_digits(digits: usize) -> Result<()> {
    if digits == 0 {
        return Err(Error::InvalidDigits(digits));
    }
    OUTPUT_DIGITS.store(digits, Ordering::Relaxed);
    Ok(())
}

pub fn output_digits() -> usize {
    OUTPUT_DIGITS.load(Ordering::Relaxed)
}

/// Accepts `[sign] digits [. digits] [e|E [sign] digits]` with at least one
/// mantissa digit.
fn is_decimal_literal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - start
    };
    if matches!(b.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let mut mantissa = digits(&mut i);
    if b.get(i) == Some(&b'.') {
        i += 1;
        mantissa += digits(&mut i);
    }
    if mantissa == 0 {
        return false;
    }
    if matches!(b.get(i), Some(b'e' | b'E')) {
        i += 1;
        if matches!(b.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        if digits(&mut i) == 0 {
            return false;
        }
    }
    i == b.len()
}

fn format_sci(x: &Float, digits: usize) -> String {
    let digits = digits.max(1);
    let (negative, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let Some(exp) = exp else {
        if x.is_zero() {
            let mut out = String::from("0");
            if digits > 1 {
                out.push('.');
                out.extend(std::iter::repeat_n('0', digits - 1));
            }
            out.push_str("e+00");
            return out;
        }
        return format!("{}{}", if negative { "-" } else { "" }, mantissa);
    };
    let exp = exp - 1;
    let mut out = String::with_capacity(digits + 8);
    if negative {
        out.push('-');
    }
    out.push_str(&mantissa[..1]);
    if mantissa.len() > 1 {
        out.push('.');
        out.push_str(&mantissa[1..]);
    }
    out.push('e');
    out.push(if exp < 0 { '-' } else { '+' });
    out.push_str(&format!("{:02}", exp.unsigned_abs()));
    out
}

/// A binary floating-point real of fixed precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct MPReal(Float);

impl MPReal {
    pub fn zero(prec: Precision) -> Self {
        MPReal(Float::new(prec.0))
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(value: i64, prec: Precision) -> Self {
        MPReal(Float::with_val(prec.0, value))
    }

    /// Converts the exact binary value of `value`.
    pub fn from_f64(value: f64, prec: Precision) -> Self {
        MPReal(Float::with_val(prec.0, value))
    }

    pub fn from_ratio(num: i64, den: i64, prec: Precision) -> Self {
        let mut x = Float::with_val(prec.0, num);
        x /= den;
        MPReal(x)
    }

    /// `2^k`, exact.
    pub fn exp2(k: i32, prec: Precision) -> Self {
        let mut x = Float::with_val(prec.0, 1);
        x <<= k;
        MPReal(x)
    }

    pub fn pi(prec: Precision) -> Self {
        MPReal(Float::with_val(prec.0, Constant::Pi))
    }

    /// Parses a decimal literal at the ambient precision.
    pub fn parse(s: &str) -> Result<Self> {
        Self::parse_with_prec(s, Precision::ambient())
    }

    pub fn parse_with_prec(s: &str, prec: Precision) -> Result<Self> {
        let s = s.trim();
        if !is_decimal_literal(s) {
            return Err(Error::Parse(s.to_string()));
        }
        let parsed = Float::parse(s).map_err(|_| Error::Parse(s.to_string()))?;
        let x = Float::with_val(prec.0, parsed);
        if !x.is_finite() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(MPReal(x))
    }

    pub(crate) fn from_float(x: Float) -> Self {
        MPReal(x)
    }

    pub(crate) fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn precision(&self) -> Precision {
        Precision(self.0.prec())
    }

    /// A copy rounded to `prec`.
    pub fn with_precision(&self, prec: Precision) -> Self {
        MPReal(Float::with_val(prec.0, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero() && !self.0.is_nan()
    }

    pub fn abs(&self) -> Self {
        MPReal(self.0.clone().abs())
    }

    pub fn square(&self) -> Self {
        MPReal(self.0.clone().square())
    }

    /// Square root; negative inputs give NaN, use [`MPComplex::sqrt`] for
    /// the principal complex root.
    pub fn sqrt(&self) -> Self {
        MPReal(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        MPReal(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        MPReal(self.0.clone().ln())
    }

    pub fn sin(&self) -> Self {
        MPReal(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        MPReal(self.0.clone().cos())
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.0.prec()));
        (MPReal(s), MPReal(c))
    }

    pub fn recip(&self) -> Self {
        MPReal(self.0.clone().recip())
    }

    pub fn hypot(&self, other: &Self) -> Self {
        MPReal(Float::with_val(max_prec(&self.0, &other.0), self.0.hypot_ref(&other.0)))
    }

    /// `self * 2^k`, exact.
    pub fn mul_exp2(&self, k: i32) -> Self {
        let mut x = self.0.clone();
        x <<= k;
        MPReal(x)
    }

    pub fn max(&self, other: &Self) -> Self {
        if other > self {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Scientific notation with `digits` significant digits, e.g.
    /// `1.0000000e+00` for eight digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        format_sci(&self.0, digits)
    }

    /// A decimal string that parses back to exactly this value.
    pub fn to_round_trip_string(&self) -> String {
        format_sci(&self.0, self.precision().round_trip_digits())
    }
}

fn max_prec(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

impl fmt::Display for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(output_digits);
        f.write_str(&format_sci(&self.0, digits))
    }
}

impl fmt::Debug for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_sci(&self.0, 20))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&MPReal> for &MPReal {
            type Output = MPReal;
            fn $method(self, rhs: &MPReal) -> MPReal {
                MPReal(Float::with_val(max_prec(&self.0, &rhs.0), &self.0 $op &rhs.0))
            }
        }
        impl $trait<MPReal> for MPReal {
            type Output = MPReal;
            fn $method(self, rhs: MPReal) -> MPReal {
                &self $op &rhs
            }
        }
        impl $trait<&MPReal> for MPReal {
            type Output = MPReal;
            fn $method(self, rhs: &MPReal) -> MPReal {
                &self $op rhs
            }
        }
        impl $trait<MPReal> for &MPReal {
            type Output = MPReal;
            fn $method(self, rhs: MPReal) -> MPReal {
                self $op &rhs
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
// Real division follows IEEE semantics (x/0 = ±inf); the complex type offers
// a checked division.
real_binop!(Div, div, /);

impl AddAssign<&MPReal> for MPReal {
    fn add_assign(&mut self, rhs: &MPReal) {
        if rhs.0.prec() > self.0.prec() {
            self.0.set_prec(rhs.0.prec());
        }
        self.0 += &rhs.0;
    }
}

impl SubAssign<&MPReal> for MPReal {
    fn sub_assign(&mut self, rhs: &MPReal) {
        if rhs.0.prec() > self.0.prec() {
            self.0.set_prec(rhs.0.prec());
        }
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&MPReal> for MPReal {
    fn mul_assign(&mut self, rhs: &MPReal) {
        if rhs.0.prec() > self.0.prec() {
            self.0.set_prec(rhs.0.prec());
        }
        self.0 *= &rhs.0;
    }
}

impl Neg for MPReal {
    type Output = MPReal;
    fn neg(self) -> MPReal {
        MPReal(-self.0)
    }
}

impl Neg for &MPReal {
    type Output = MPReal;
    fn neg(self) -> MPReal {
        MPReal(-self.0.clone())
    }
}

/// A complex number with real and imaginary parts of equal precision.
#[derive(Clone, PartialEq)]
pub struct MPComplex {
    re: MPReal,
    im: MPReal,
}

impl MPComplex {
    /// Both parts are brought to the larger of their precisions.
    pub fn new(re: MPReal, im: MPReal) -> Self {
        let prec = re.0.prec().max(im.0.prec());
        let lift = |x: MPReal| {
            if x.0.prec() == prec {
                x
            } else {
                MPReal(Float::with_val(prec, &x.0))
            }
        };
        MPComplex {
            re: lift(re),
            im: lift(im),
        }
    }

    pub fn zero(prec: Precision) -> Self {
        MPComplex {
            re: MPReal::zero(prec),
            im: MPReal::zero(prec),
        }
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_real(MPReal::one(prec))
    }

    pub fn i(prec: Precision) -> Self {
        MPComplex {
            re: MPReal::zero(prec),
            im: MPReal::one(prec),
        }
    }

    pub fn from_real(re: MPReal) -> Self {
        let im = MPReal::zero(re.precision());
        MPComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        MPComplex {
            re: MPReal::from_f64(re, prec),
            im: MPReal::from_f64(im, prec),
        }
    }

    /// Parses the two parts as decimal literals.
    pub fn parse_parts(re: &str, im: &str, prec: Precision) -> Result<Self> {
        Ok(MPComplex {
            re: MPReal::parse_with_prec(re, prec)?,
            im: MPReal::parse_with_prec(im, prec)?,
        })
    }

    /// `e^{iθ}`.
    pub fn cis(theta: &MPReal) -> Self {
        let (s, c) = theta.sin_cos();
        MPComplex { re: c, im: s }
    }

    pub fn re(&self) -> &MPReal {
        &self.re
    }

    pub fn im(&self) -> &MPReal {
        &self.im
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut Float, &mut Float) {
        (&mut self.re.0, &mut self.im.0)
    }

    pub fn into_parts(self) -> (MPReal, MPReal) {
        (self.re, self.im)
    }

    pub fn precision(&self) -> Precision {
        self.re.precision()
    }

    pub fn with_precision(&self, prec: Precision) -> Self {
        MPComplex {
            re: self.re.with_precision(prec),
            im: self.im.with_precision(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `re² + im²` with a single rounding.
    pub fn norm_sqr(&self) -> MPReal {
        let (a, b) = (&self.re.0, &self.im.0);
        MPReal(Float::with_val(a.prec(), a * a + b * b))
    }

    /// Modulus, computed without intermediate overflow.
    pub fn abs(&self) -> MPReal {
        self.re.hypot(&self.im)
    }

    pub fn conj(&self) -> Self {
        MPComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn scale(&self, k: &MPReal) -> Self {
        MPComplex {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    /// Division by a real; IEEE semantics when `k` is zero.
    pub fn div_real(&self, k: &MPReal) -> Self {
        MPComplex {
            re: &self.re / k,
            im: &self.im / k,
        }
    }

    pub fn mul_i(&self) -> Self {
        MPComplex {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    /// Smith's algorithm, which scales by the larger component of the divisor.
    pub fn checked_div(&self, rhs: &MPComplex) -> Result<MPComplex> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (a, b) = (&self.re, &self.im);
        let (c, d) = (&rhs.re, &rhs.im);
        if c.abs() >= d.abs() {
            let r = d / c;
            let den = c + &(d * &r);
            Ok(MPComplex::new((a + &(b * &r)) / &den, (b - &(a * &r)) / &den))
        } else {
            let r = c / d;
            let den = &(c * &r) + d;
            Ok(MPComplex::new((&(a * &r) + b) / &den, (&(b * &r) - a) / &den))
        }
    }

    /// Principal square root (non-negative real part, branch cut on the
    /// negative real axis with the upper half-plane side).
    pub fn sqrt(&self) -> Self {
        let prec = self.precision();
        if self.is_zero() {
            return MPComplex::zero(prec);
        }
        let r = self.abs();
        let two = MPReal::from_i64(2, prec);
        if !self.re.is_sign_negative() {
            let t = ((&r + &self.re) / &two).sqrt();
            let im = &self.im / &(&t * &two);
            MPComplex { re: t, im }
        } else {
            let t = ((&r - &self.re) / &two).sqrt();
            let re = self.im.abs() / (&t * &two);
            let im = if self.im.is_sign_negative() { -t } else { t };
            MPComplex { re, im }
        }
    }

    pub fn exp(&self) -> Self {
        let modulus = self.re.exp();
        let (s, c) = self.im.sin_cos();
        MPComplex {
            re: &modulus * &c,
            im: &modulus * &s,
        }
    }

    /// `self += a * b`.
    pub fn mul_add_assign(&mut self, a: &MPComplex, b: &MPComplex) {
        let prec = self.re.0.prec();
        let re = Float::with_val(prec, &a.re.0 * &b.re.0 - &a.im.0 * &b.im.0);
        let im = Float::with_val(prec, &a.re.0 * &b.im.0 + &a.im.0 * &b.re.0);
        self.re.0 += re;
        self.im.0 += im;
    }

    /// `self += conj(a) * b`.
    pub fn conj_mul_add_assign(&mut self, a: &MPComplex, b: &MPComplex) {
        let prec = self.re.0.prec();
        let re = Float::with_val(prec, &a.re.0 * &b.re.0 + &a.im.0 * &b.im.0);
        let im = Float::with_val(prec, &a.re.0 * &b.im.0 - &a.im.0 * &b.re.0);
        self.re.0 += re;
        self.im.0 += im;
    }

    /// `(re,im)` in scientific notation with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        format!(
            "({},{})",
            self.re.to_sci_string(digits),
            self.im.to_sci_string(digits)
        )
    }
}

impl fmt::Display for MPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(output_digits);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl fmt::Debug for MPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(20))
    }
}

impl From<MPReal> for MPComplex {
    fn from(re: MPReal) -> Self {
        MPComplex::from_real(re)
    }
}

impl Add<&MPComplex> for &MPComplex {
    type Output = MPComplex;
    fn add(self, rhs: &MPComplex) -> MPComplex {
        MPComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&MPComplex> for &MPComplex {
    type Output = MPComplex;
    fn sub(self, rhs: &MPComplex) -> MPComplex {
        MPComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&MPComplex> for &MPComplex {
    type Output = MPComplex;
    fn mul(self, rhs: &MPComplex) -> MPComplex {
        let prec = max_prec(&self.re.0, &rhs.re.0);
        let (a, b, c, d) = (&self.re.0, &self.im.0, &rhs.re.0, &rhs.im.0);
        MPComplex {
            re: MPReal(Float::with_val(prec, a * c - b * d)),
            im: MPReal(Float::with_val(prec, a * d + b * c)),
        }
    }
}

macro_rules! complex_owned_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<MPComplex> for MPComplex {
            type Output = MPComplex;
            fn $method(self, rhs: MPComplex) -> MPComplex {
                &self $op &rhs
            }
        }
        impl $trait<&MPComplex> for MPComplex {
            type Output = MPComplex;
            fn $method(self, rhs: &MPComplex) -> MPComplex {
                &self $op rhs
            }
        }
        impl $trait<MPComplex> for &MPComplex {
            type Output = MPComplex;
            fn $method(self, rhs: MPComplex) -> MPComplex {
                self $op &rhs
            }
        }
    };
}

complex_owned_binop!(Add, add, +);
complex_owned_binop!(Sub, sub, -);
complex_owned_binop!(Mul, mul, *);

impl AddAssign<&MPComplex> for MPComplex {
    fn add_assign(&mut self, rhs: &MPComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&MPComplex> for MPComplex {
    fn sub_assign(&mut self, rhs: &MPComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for MPComplex {
    type Output = MPComplex;
    fn neg(self) -> MPComplex {
        MPComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &MPComplex {
    type Output = MPComplex;
    fn neg(self) -> MPComplex {
        MPComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}
