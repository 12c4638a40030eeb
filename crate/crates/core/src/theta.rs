//! Jacobi θ₁ with nome `p = e^{πit}`:
//!
//! `θ₁(v|t) = 2 Σ_{k≥0} (−1)^k p^{(k+½)²} sin((2k+1)πv)`
//!         `= 2 p^{1/4} sin(πv) (p²;p²)_∞ (p² e^{2πiv};p²)_∞ (p² e^{−2πiv};p²)_∞`.
//!
//! Values are carried as [`LogValue`] with the `p^{1/4}` factor applied in
//! log space: at `t = 2i/τ` it equals `e^{−π/(2τ)}`, which underflows for
//! small τ.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{
    ensure_finite, ensure_finite_real, one_minus_exp_neg, principal_log, sinpi_complex,
    CompensatedSum, ComplexValue, LogComplex, LogValue, Tolerance,
};
use crate::pochhammer::{log_product_in_base, product_term_cap, QParameter, TruncationReport};

const SERIES_TERM_CAP: usize = 64;
/// `ln(1e−16)`: series stop once the term estimate drops this far below
/// the largest one seen.
const LN_STOP: f64 = -36.841_361_487_904_734;
/// The terms must be decreasing from this index on.
const ADMISSIBLE_PEAK: f64 = 8.0;

/// Nome `p = e^{πit}` of a theta series, stored through `t`, `Im t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    t: ComplexValue,
}

impl Nome {
    pub fn new(t: ComplexValue) -> Result<Self> {
        ensure_finite(t, "Nome::new")?;
        if t.im <= 0.0 {
            return Err(Error::Domain {
                op: "Nome::new",
                reason: "requires Im(t) > 0",
            });
        }
        Ok(Nome { t })
    }

    /// `t = 2i/τ`, giving the real nome `p = e^{−2π/τ}`.
    pub fn from_tau(tau: f64) -> Result<Self> {
        ensure_finite_real(tau, "Nome::from_tau")?;
        if tau <= 0.0 {
            return Err(Error::Domain {
                op: "Nome::from_tau",
                reason: "tau must be positive",
            });
        }
        Self::new(ComplexValue::new(0.0, 2.0 / tau))
    }

    /// Real nome `p` in `(0, 1)`; `t = i·ln(1/p)/π`.
    pub fn from_real_p(p: f64) -> Result<Self> {
        ensure_finite_real(p, "Nome::from_real_p")?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain {
                op: "Nome::from_real_p",
                reason: "p must lie in (0, 1)",
            });
        }
        Self::new(ComplexValue::new(0.0, -libm::log(p) / PI))
    }

    pub fn t(&self) -> ComplexValue {
        self.t
    }

    /// `ln p = iπt`.
    pub fn ln_p(&self) -> ComplexValue {
        ComplexValue::new(0.0, PI) * self.t
    }

    pub fn p(&self) -> ComplexValue {
        self.ln_p().exp()
    }

    /// `π Im t = −ln|p|`, the Gaussian decay rate of the series.
    fn decay(&self) -> f64 {
        PI * self.t.im
    }
}

/// `sin((2k+1)πv)·p^{k(k+1)}` without overflowing the sine for large
/// `Im v` when the product itself is representable.
fn series_term(v: ComplexValue, k: usize, ln_p: ComplexValue) -> ComplexValue {
    let m = (2 * k + 1) as f64;
    let kk = (k * (k + 1)) as f64;
    let arg = v * m;
    if libm::fabs(PI * arg.im) < 600.0 {
        sinpi_complex(arg) * (ln_p * kk).exp()
    } else {
        let ipz = ComplexValue::new(0.0, PI) * arg;
        let e1 = (ln_p * kk + ipz).exp();
        let e2 = (ln_p * kk - ipz).exp();
        (e1 - e2) / ComplexValue::new(0.0, 2.0)
    }
}

/// θ₁(v|t), returned in log form together with the truncation report.
///
/// `tail_bound` is relative to the largest term of the scaled series.
pub fn theta1_series_log(v: ComplexValue, nome: Nome) -> Result<(LogValue, TruncationReport)> {
    ensure_finite(v, "theta1_series")?;
    let b = nome.decay();
    let a = PI * libm::fabs(v.im);
    // log-magnitude estimate of term k (scaled by p^{−1/4}):
    // −b k(k+1) + a(2k+1) ≥ ln |p^{k(k+1)} sin((2k+1)πv)|
    let peak = a / b - 0.5;
    if peak > ADMISSIBLE_PEAK {
        return Err(Error::DivergenceRisk {
            op: "theta1_series",
        });
    }
    let est = |k: usize| -b * (k * (k + 1)) as f64 + a * (2 * k + 1) as f64;
    let ln_p = nome.ln_p();
    let mut sum = CompensatedSum::new();
    let mut max_est = f64::NEG_INFINITY;
    for k in 0..SERIES_TERM_CAP {
        let term = series_term(v, k, ln_p);
        sum.add(if k % 2 == 0 { term } else { -term });
        max_est = max_est.max(est(k));
        let next = est(k + 1);
        if (k + 1) as f64 > peak && next - max_est < LN_STOP {
            let ratio = libm::exp(est(k + 2) - next);
            let tail = libm::exp(next - max_est) / (1.0 - ratio);
            let report = TruncationReport {
                terms_used: k + 1,
                tail_bound: tail,
            };
            let s = sum.value();
            if s.re == 0.0 && s.im == 0.0 {
                return Ok((LogValue::Zero, report));
            }
            let l = libm::log(2.0) + ln_p * 0.25 + principal_log(s)?;
            return Ok((LogValue::NonZero(LogComplex::from_log(l)), report));
        }
    }
    Err(Error::CapExceeded {
        op: "theta1_series",
        terms: SERIES_TERM_CAP,
    })
}

/// θ₁(v|t) by its sine series.
pub fn theta1_series(v: ComplexValue, nome: Nome) -> Result<ComplexValue> {
    Ok(theta1_series_log(v, nome)?.0.to_complex())
}

/// θ₁'(0|t) = 2π Σ (−1)^k (2k+1) p^{(k+½)²}, in log form.
pub fn theta1_prime0_log(nome: Nome) -> Result<LogComplex> {
    let b = nome.decay();
    let ln_p = nome.ln_p();
    let mut sum = CompensatedSum::new();
    for k in 0..SERIES_TERM_CAP {
        let m = (2 * k + 1) as f64;
        let term = (ln_p * (k * (k + 1)) as f64).exp() * m;
        sum.add(if k % 2 == 0 { term } else { -term });
        let next = libm::log((2 * k + 3) as f64) - b * ((k + 1) * (k + 2)) as f64;
        if next < LN_STOP {
            let l = libm::log(2.0 * PI) + ln_p * 0.25 + principal_log(sum.value())?;
            return Ok(LogComplex::from_log(l));
        }
    }
    Err(Error::CapExceeded {
        op: "theta1_prime0",
        terms: SERIES_TERM_CAP,
    })
}

/// θ₁'(0|t).
pub fn theta1_prime0(nome: Nome) -> Result<ComplexValue> {
    Ok(theta1_prime0_log(nome)?.to_complex())
}

/// θ₁(v|t) by the triple product, in log form.
pub fn theta1_product_log(v: ComplexValue, nome: Nome) -> Result<LogValue> {
    ensure_finite(v, "theta1_product")?;
    let ln_p = nome.ln_p();
    let ln_base = ln_p * 2.0;
    let twist = ComplexValue::new(0.0, 2.0 * PI) * v;
    let ln_up = ln_base + twist;
    let ln_down = ln_base - twist;
    if ln_up.re >= 0.0 || ln_down.re >= 0.0 {
        return Err(Error::Domain {
            op: "theta1_product",
            reason: "requires |p^2 e^{±2πiv}| < 1",
        });
    }
    let s = sinpi_complex(v);
    if s.re == 0.0 && s.im == 0.0 {
        return Ok(LogValue::Zero);
    }
    let tol = Tolerance::relative(1e-16)?;
    let op = "theta1_product";
    let mut acc = LogValue::NonZero(LogComplex::from_log(
        libm::log(2.0) + ln_p * 0.25 + principal_log(s)?,
    ));
    for ln_a in [ln_base, ln_up, ln_down] {
        let cap = product_term_cap(ln_base.re, libm::exp(ln_a.re));
        let (f, _) = log_product_in_base(ln_a.exp(), ln_base, tol, cap, op)?;
        acc = acc * f;
    }
    Ok(acc)
}

/// θ₁(v|t) by the triple product.
pub fn theta1_product(v: ComplexValue, nome: Nome) -> Result<ComplexValue> {
    Ok(theta1_product_log(v, nome)?.to_complex())
}

/// Relative residual of `θ₁(v/t | −1/t) = −i √(t/i) e^{πiv²/t} θ₁(v|t)`,
/// both sides by series; `√` is principal.
pub fn theta1_transform_check(v: ComplexValue, t: ComplexValue) -> Result<f64> {
    ensure_finite(v, "theta1_transform_check")?;
    let nome = Nome::new(t)?;
    let dual = Nome::new(-t.inv())?;
    let (lhs, _) = theta1_series_log(v / t, dual)?;
    let (rhs_theta, _) = theta1_series_log(v, nome)?;
    let i = ComplexValue::new(0.0, 1.0);
    let prefactor = LogComplex::from_log(
        ComplexValue::new(0.0, -0.5 * PI) + principal_log(t / i)? * 0.5 + i * PI * v * v / t,
    );
    let rhs = LogValue::NonZero(prefactor) * rhs_theta;
    Ok(match (lhs, rhs) {
        (LogValue::Zero, LogValue::Zero) => 0.0,
        (LogValue::Zero, _) | (_, LogValue::Zero) => 1.0,
        (LogValue::NonZero(l), LogValue::NonZero(r)) => {
            let d = r.ln() - l.ln();
            // |L − R| / max(|L|, |R|) = |1 − e^{±d}|
            if d.re <= 0.0 {
                one_minus_exp_neg(-d).norm()
            } else {
                one_minus_exp_neg(d).norm()
            }
        }
    })
}

/// `(q;q)³_∞ = √2 e^{πτ/8} θ₁'(0|2i/τ) / (π τ^{3/2})`.
pub fn qqq_cubed_theta(q: QParameter) -> Result<LogComplex> {
    let tau = q.tau();
    let prime = theta1_prime0_log(Nome::from_tau(tau)?)?;
    let l = 0.5 * libm::log(2.0) + PI * tau / 8.0 - libm::log(PI) - 1.5 * libm::log(tau);
    Ok(LogComplex::new(l, 0.0) * prime)
}

fn is_integer(x: ComplexValue) -> bool {
    x.im == 0.0 && libm::floor(x.re) == x.re
}

/// `(q, q^{1+x}, q^{1−x}; q)_∞ = e^{πτ/8 + πτx²/2} θ₁(x|2i/τ) / (√(2τ) sinh(πτx/2))`.
///
/// At `x = 0` both θ₁ and sinh vanish; the limit `(q;q)³_∞` is taken via
/// θ₁'(0). Other integers are rejected.
pub fn triple_pochhammer_theta(x: ComplexValue, q: QParameter) -> Result<LogComplex> {
    ensure_finite(x, "triple_pochhammer_theta")?;
    if x.re == 0.0 && x.im == 0.0 {
        return qqq_cubed_theta(q);
    }
    if is_integer(x) {
        return Err(Error::Domain {
            op: "triple_pochhammer_theta",
            reason: "x must not be a nonzero integer",
        });
    }
    let tau = q.tau();
    let (theta, _) = theta1_series_log(x, Nome::from_tau(tau)?)?;
    let theta = theta.nonzero().ok_or(Error::Domain {
        op: "triple_pochhammer_theta",
        reason: "theta vanishes",
    })?;
    let sinh = (x * (0.5 * PI * tau)).sinh();
    let l = (x * x * 0.5 + 0.125) * (PI * tau) - 0.5 * libm::log(2.0 * tau) - principal_log(sinh)?;
    Ok(LogComplex::from_log(l) * theta)
}

/// Leading small-τ approximants `(2π e^{−π/(2τ)}, 2 sin(πx) e^{−π/(2τ)})`
/// of `θ₁'(0|2i/τ)` and `θ₁(x|2i/τ)`.
pub fn theta1_asym_small_tau(x: ComplexValue, tau: f64) -> Result<(LogComplex, LogValue)> {
    ensure_finite(x, "theta1_asym_small_tau")?;
    ensure_finite_real(tau, "theta1_asym_small_tau")?;
    if tau <= 0.0 {
        return Err(Error::Domain {
            op: "theta1_asym_small_tau",
            reason: "tau must be positive",
        });
    }
    let scale = -PI / (2.0 * tau);
    let prime = LogComplex::new(libm::log(2.0 * PI) + scale, 0.0);
    let s = sinpi_complex(x);
    let theta = if s.re == 0.0 && s.im == 0.0 {
        LogValue::Zero
    } else {
        LogValue::NonZero(LogComplex::from_log(
            principal_log(s)? + libm::log(2.0) + scale,
        ))
    };
    Ok((prime, theta))
}
