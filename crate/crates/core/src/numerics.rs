//! Branch-correct complex primitives.
//!
//! All logarithms and powers use the principal branch, phase in `(−π, π]`.
//! Products of quantities whose magnitude can leave the `f64` range travel
//! as [`LogComplex`]; exact zeros are carried by [`LogValue::Zero`].

use core::f64::consts::PI;
use core::ops::{Div, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the complex plane. Operations reject non-finite parts.
pub type ComplexValue = Complex64;

const TWO_PI: f64 = 2.0 * PI;

pub(crate) fn ensure_finite(z: ComplexValue, op: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { op })
    }
}

pub(crate) fn ensure_finite_real(x: f64, op: &'static str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { op })
    }
}

/// Reduce an angle to `(−π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut r = theta % TWO_PI;
    if r <= -PI {
        r += TWO_PI;
    } else if r > PI {
        r -= TWO_PI;
    }
    r
}

/// Nonzero complex number stored as `exp(log_mag + i·phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    log_mag: f64,
    phase: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        LogComplex {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    /// Wrap a complex logarithm `ℓ`, representing `e^ℓ`.
    pub fn from_log(l: ComplexValue) -> Self {
        Self::new(l.re, l.im)
    }

    /// `None` for zero.
    pub fn from_complex(z: ComplexValue) -> Option<Self> {
        if z.re == 0.0 && z.im == 0.0 {
            return None;
        }
        principal_log(z).ok().map(Self::from_log)
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// The principal logarithm of the represented value.
    pub fn ln(&self) -> ComplexValue {
        ComplexValue::new(self.log_mag, self.phase)
    }

    pub fn magnitude(&self) -> f64 {
        libm::exp(self.log_mag)
    }

    /// Convert back to a plain complex number; may under- or overflow.
    pub fn to_complex(&self) -> ComplexValue {
        let m = libm::exp(self.log_mag);
        ComplexValue::new(m * libm::cos(self.phase), m * libm::sin(self.phase))
    }

    pub fn recip(&self) -> Self {
        Self::new(-self.log_mag, -self.phase)
    }

    /// Principal power `self^e`, i.e. `exp(e · ln self)`.
    pub fn powc(&self, e: ComplexValue) -> Self {
        Self::from_log(e * self.ln())
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        LogComplex::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        LogComplex::new(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

/// A [`LogComplex`] or an exact zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogValue {
    Zero,
    NonZero(LogComplex),
}

impl LogValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, LogValue::Zero)
    }

    pub fn to_complex(&self) -> ComplexValue {
        match self {
            LogValue::Zero => ComplexValue::new(0.0, 0.0),
            LogValue::NonZero(l) => l.to_complex(),
        }
    }

    pub fn nonzero(self) -> Option<LogComplex> {
        match self {
            LogValue::Zero => None,
            LogValue::NonZero(l) => Some(l),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        match (self, rhs) {
            (LogValue::NonZero(a), LogValue::NonZero(b)) => LogValue::NonZero(a * b),
            _ => LogValue::Zero,
        }
    }
}

impl From<LogComplex> for LogValue {
    fn from(l: LogComplex) -> Self {
        LogValue::NonZero(l)
    }
}

/// Relative and absolute error budgets; a result is accepted when its
/// error bound meets either one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(rel) || !ok(abs) {
            return Err(Error::Domain {
                op: "Tolerance::new",
                reason: "budgets must be finite and non-negative",
            });
        }
        if rel == 0.0 && abs == 0.0 {
            return Err(Error::Domain {
                op: "Tolerance::new",
                reason: "rel and abs cannot both be zero",
            });
        }
        Ok(Tolerance { rel, abs })
    }

    pub fn relative(rel: f64) -> Result<Self> {
        Self::new(rel, 0.0)
    }

    /// Decide whether a bound `tail` on the omitted part of a *logarithm*
    /// is small enough, given the log-magnitude of the running value.
    pub(crate) fn accepts_log_tail(&self, tail: f64, log_mag: f64) -> bool {
        if !tail.is_finite() {
            return false;
        }
        // |value| · (e^tail − 1) bounds the error in the value itself.
        let rel_err = libm::expm1(tail);
        if rel_err <= self.rel {
            return true;
        }
        self.abs > 0.0 && log_mag + libm::log(rel_err) <= libm::log(self.abs)
    }

    /// Same test for an additive series whose partial sum has magnitude
    /// `scale`.
    pub fn accepts_abs(&self, tail: f64, scale: f64) -> bool {
        tail <= self.abs || tail <= self.rel * scale
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-14,
            abs: 0.0,
        }
    }
}

/// Principal logarithm, imaginary part in `(−π, π]`.
pub fn principal_log(z: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(z, "principal_log")?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain {
            op: "principal_log",
            reason: "logarithm of zero",
        });
    }
    let r = libm::hypot(z.re, z.im);
    let re = if r > 0.5 && r < 2.0 {
        // ln|z| without the cancellation of ln(r) near |z| = 1.
        0.5 * libm::log1p((z.re - 1.0) * (z.re + 1.0) + z.im * z.im)
    } else {
        libm::log(r)
    };
    let mut im = libm::atan2(z.im, z.re);
    if im == -PI {
        im = PI;
    }
    Ok(ComplexValue::new(re, im))
}

/// `ln(1 + w)` accurate for small `|w|`; `w ≠ −1`.
pub(crate) fn log1p_complex(w: ComplexValue) -> ComplexValue {
    let re = 0.5 * libm::log1p(w.re * (2.0 + w.re) + w.im * w.im);
    let im = libm::atan2(w.im, 1.0 + w.re);
    ComplexValue::new(re, if im == -PI { PI } else { im })
}

/// Principal power `base^exponent = exp(exponent · Log base)`.
///
/// `0^e` is [`LogValue::Zero`] for `Re e > 0` and a domain error otherwise.
pub fn complex_pow(base: ComplexValue, exponent: ComplexValue) -> Result<LogValue> {
    ensure_finite(base, "complex_pow")?;
    ensure_finite(exponent, "complex_pow")?;
    if base.re == 0.0 && base.im == 0.0 {
        if exponent.re > 0.0 {
            return Ok(LogValue::Zero);
        }
        return Err(Error::Domain {
            op: "complex_pow",
            reason: "zero base with non-positive real exponent",
        });
    }
    Ok(LogValue::NonZero(LogComplex::from_log(
        exponent * principal_log(base)?,
    )))
}

/// `e^z − 1` for complex `z`, via real `expm1`.
pub(crate) fn expm1_complex(z: ComplexValue) -> ComplexValue {
    let em1 = libm::expm1(z.re);
    let s = libm::sin(0.5 * z.im);
    let re = em1 * libm::cos(z.im) - 2.0 * s * s;
    let im = libm::exp(z.re) * libm::sin(z.im);
    ComplexValue::new(re, im)
}

/// `1 − e^{−a}` without cancellation for small `|a|`.
pub fn one_minus_exp_neg(a: ComplexValue) -> ComplexValue {
    if a.norm() < 0.5 {
        // a − a²/2! + a³/3! − …
        let mut term = a;
        let mut sum = a;
        for k in 2..40 {
            term = -term * a / k as f64;
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        -expm1_complex(-a)
    }
}

/// `1 − e^{−a}` for real `a`.
pub(crate) fn one_minus_exp_neg_real(a: f64) -> f64 {
    -libm::expm1(-a)
}

/// `sin(πx)`, exactly zero at integers.
pub fn sinpi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r <= -1.0 {
        r += 2.0;
    }
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        libm::sin(PI * (1.0 - r))
    } else if r < -0.5 {
        -libm::sin(PI * (1.0 + r))
    } else {
        libm::sin(PI * r)
    }
}

/// `cos(πx)`, exactly zero at half-integers.
pub fn cospi(x: f64) -> f64 {
    let mut r = libm::fabs(x) % 2.0;
    if r > 1.0 {
        r = 2.0 - r;
    }
    if r == 0.5 {
        0.0
    } else if r < 0.25 {
        libm::cos(PI * r)
    } else if r < 0.75 {
        libm::sin(PI * (0.5 - r))
    } else {
        -libm::cos(PI * (1.0 - r))
    }
}

/// `sin(πz)` for complex `z`.
pub fn sinpi_complex(z: ComplexValue) -> ComplexValue {
    if z.im == 0.0 {
        return ComplexValue::new(sinpi(z.re), 0.0);
    }
    let y = PI * z.im;
    ComplexValue::new(sinpi(z.re) * libm::cosh(y), cospi(z.re) * libm::sinh(y))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: ComplexValue,
    comp: ComplexValue,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: ComplexValue) {
        let (s, c) = two_sum(self.sum.re, x.re);
        let (t, d) = two_sum(self.sum.im, x.im);
        self.sum = ComplexValue::new(s, t);
        self.comp += ComplexValue::new(c, d);
    }

    pub fn value(&self) -> ComplexValue {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let c = if libm::fabs(a) >= libm::fabs(b) {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, c)
}
