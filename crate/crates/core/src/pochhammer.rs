//! Infinite q-Pochhammer symbols `(a;q)_∞ = ∏_{k≥0} (1 − a q^k)`.
//!
//! Two exact evaluators (direct product and the log-series
//! `(z;q)_∞ = exp{−Σ z^k / (k(1−q^k))}`), a term-count based selector,
//! and the small-τ approximant of `(q^{w+1};q)_∞`.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{
    ensure_finite, ensure_finite_real, log1p_complex, one_minus_exp_neg, one_minus_exp_neg_real,
    principal_log, CompensatedSum, ComplexValue, LogComplex, LogValue, Tolerance,
};
use crate::special::log_gamma;

/// Hard ceiling on product or series terms.
pub const HARD_TERM_CAP: usize = 10_000_000;

/// The base `q = e^{−πτ}`, stored through `τ` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParameter {
    tau: f64,
}

impl QParameter {
    pub fn new(tau: f64) -> Result<Self> {
        ensure_finite_real(tau, "QParameter::new")?;
        if tau <= 0.0 {
            return Err(Error::Domain {
                op: "QParameter::new",
                reason: "tau must be positive",
            });
        }
        let q = libm::exp(-PI * tau);
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                op: "QParameter::new",
                reason: "q = exp(-pi tau) must lie strictly inside (0, 1) in f64",
            });
        }
        Ok(QParameter { tau })
    }

    /// Convenience constructor from `q ∈ (0, 1)`; `τ = −ln q / π`.
    pub fn from_q(q: f64) -> Result<Self> {
        ensure_finite_real(q, "QParameter::from_q")?;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                op: "QParameter::from_q",
                reason: "q must lie in (0, 1)",
            });
        }
        Self::new(-libm::log(q) / PI)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn q(&self) -> f64 {
        libm::exp(-PI * self.tau)
    }

    /// `ln q = −πτ`, exact up to one rounding.
    pub fn ln_q(&self) -> f64 {
        -PI * self.tau
    }

    /// `1 − q` without cancellation.
    pub fn one_minus_q(&self) -> f64 {
        one_minus_exp_neg_real(PI * self.tau)
    }

    /// `q^z = e^{−πτz}`.
    pub fn pow(&self, z: ComplexValue) -> ComplexValue {
        (z * self.ln_q()).exp()
    }
}

/// How many terms a truncated evaluation used and a rigorous bound on what
/// it left out (on the logarithm of the result for products).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TruncationReport {
    pub terms_used: usize,
    pub tail_bound: f64,
}

impl TruncationReport {
    /// Combined report for a quantity assembled from several truncations.
    pub fn merge(self, other: TruncationReport) -> TruncationReport {
        TruncationReport {
            terms_used: self.terms_used + other.terms_used,
            tail_bound: self.tail_bound + other.tail_bound,
        }
    }
}

/// Term cap for the product in base `e^{ln_base}` with prefactor `|a|`:
/// enough factors for `|a| |b|^k` to fall below `e^{−40}`, plus slack.
pub(crate) fn product_term_cap(ln_base_re: f64, a_abs: f64) -> usize {
    let decay = -ln_base_re;
    let excess = if a_abs > 1.0 { libm::log(a_abs) } else { 0.0 };
    let k = libm::ceil((40.0 + excess) / decay) + 64.0;
    if k.is_finite() && k < HARD_TERM_CAP as f64 {
        k as usize
    } else {
        HARD_TERM_CAP
    }
}

/// `Σ_k Log(1 − a b^k)` with `b = e^{ln_base}`, `Re ln_base < 0`.
pub(crate) fn log_product_in_base(
    a: ComplexValue,
    ln_base: ComplexValue,
    tol: Tolerance,
    cap: usize,
    op: &'static str,
) -> Result<(LogValue, TruncationReport)> {
    if a.re == 0.0 && a.im == 0.0 {
        return Ok((
            LogValue::NonZero(LogComplex::ONE),
            TruncationReport::default(),
        ));
    }
    let a_abs = a.norm();
    let one_minus_b = one_minus_exp_neg_real(-ln_base.re);
    let mut sum = CompensatedSum::new();
    for k in 0..cap {
        let u = a * (ln_base * k as f64).exp();
        if u.re == 1.0 && u.im == 0.0 {
            return Ok((
                LogValue::Zero,
                TruncationReport {
                    terms_used: k + 1,
                    tail_bound: 0.0,
                },
            ));
        }
        sum.add(log1p_complex(-u));

        // Σ_{j>k} |log(1 − u_j)| ≤ r / ((1 − r)(1 − |b|)), r = |a||b|^{k+1}
        let r = a_abs * libm::exp(ln_base.re * (k + 1) as f64);
        if r < 0.5 {
            let tail = r / ((1.0 - r) * one_minus_b);
            let partial = sum.value();
            if tol.accepts_log_tail(tail, partial.re) || r == 0.0 {
                return Ok((
                    LogValue::NonZero(LogComplex::from_log(partial)),
                    TruncationReport {
                        terms_used: k + 1,
                        tail_bound: tail,
                    },
                ));
            }
        }
    }
    Err(Error::CapExceeded { op, terms: cap })
}

/// `(a;q)_∞` by direct product, accumulated as a sum of logarithms.
///
/// Returns [`LogValue::Zero`] exactly when a factor `1 − a q^k` vanishes.
pub fn qpoch_log_product(
    a: ComplexValue,
    q: QParameter,
    tol: Tolerance,
) -> Result<(LogValue, TruncationReport)> {
    ensure_finite(a, "qpoch_log_product")?;
    let cap = product_term_cap(q.ln_q(), a.norm());
    log_product_in_base(
        a,
        ComplexValue::new(q.ln_q(), 0.0),
        tol,
        cap,
        "qpoch_log_product",
    )
}

/// `(z;q)_∞ = exp{−Σ_{k≥1} z^k / (k(1 − q^k))}` for `|z| < 1`.
pub fn qpoch_log_series(
    z: ComplexValue,
    q: QParameter,
    tol: Tolerance,
) -> Result<(LogComplex, TruncationReport)> {
    ensure_finite(z, "qpoch_log_series")?;
    let z_abs = z.norm();
    if z_abs >= 1.0 {
        return Err(Error::Domain {
            op: "qpoch_log_series",
            reason: "series requires |z| < 1",
        });
    }
    if z_abs == 0.0 {
        return Ok((LogComplex::ONE, TruncationReport::default()));
    }
    let ln_q = q.ln_q();
    let one_minus_q = q.one_minus_q();
    let mut zk = ComplexValue::new(1.0, 0.0);
    let mut sum = CompensatedSum::new();
    for k in 1..HARD_TERM_CAP {
        zk *= z;
        let denom = k as f64 * one_minus_exp_neg_real(-ln_q * k as f64);
        sum.add(zk / denom);
        let kk = (k + 1) as f64;
        let tail = libm::pow(z_abs, kk) / (kk * (1.0 - z_abs) * one_minus_q);
        let partial = sum.value();
        if tol.accepts_log_tail(tail, -partial.re) || tail == 0.0 {
            return Ok((
                LogComplex::from_log(-partial),
                TruncationReport {
                    terms_used: k,
                    tail_bound: tail,
                },
            ));
        }
    }
    Err(Error::CapExceeded {
        op: "qpoch_log_series",
        terms: HARD_TERM_CAP,
    })
}

/// Which exact evaluator [`qpoch_log`] picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerStrategy {
    Product,
    Series,
}

fn estimated_product_terms(a_abs: f64, q: QParameter, rel: f64) -> f64 {
    // |a| q^K ≲ rel (1 − q)
    let k = libm::log(rel * q.one_minus_q() / a_abs) / q.ln_q();
    if k > 0.0 {
        k
    } else {
        1.0
    }
}

fn estimated_series_terms(a_abs: f64, q: QParameter, rel: f64) -> f64 {
    // |a|^K ≲ rel (1 − |a|)(1 − q)
    let k = libm::log(rel * (1.0 - a_abs) * q.one_minus_q()) / libm::log(a_abs);
    if k > 0.0 {
        k
    } else {
        1.0
    }
}

/// `(a;q)_∞` by whichever exact route needs fewer terms according to the
/// analytic estimates; the series is only eligible for `|a| < 1`.
pub fn qpoch_log(
    a: ComplexValue,
    q: QParameter,
    tol: Tolerance,
) -> Result<(LogValue, TruncationReport, PochhammerStrategy)> {
    ensure_finite(a, "qpoch_log")?;
    let a_abs = a.norm();
    let rel = if tol.rel > 0.0 { tol.rel } else { 1e-16 };
    let use_series = a_abs > 0.0
        && a_abs < 1.0
        && estimated_series_terms(a_abs, q, rel) < estimated_product_terms(a_abs, q, rel);
    if use_series {
        let (v, rep) = qpoch_log_series(a, q, tol)?;
        Ok((LogValue::NonZero(v), rep, PochhammerStrategy::Series))
    } else {
        let (v, rep) = qpoch_log_product(a, q, tol)?;
        Ok((v, rep, PochhammerStrategy::Product))
    }
}

/// Small-τ approximant of `(q^{w+1};q)_∞`:
///
/// `√(2π) w^{w−1/2} e^{−π/(6τ)} / (Γ(w) (1 − e^{−τπw})^{w+1/2})`,
/// assembled in log space (the `e^{−π/(6τ)}` factor alone underflows for
/// τ below about 0.004). Requires `Re w > 0`.
pub fn qpoch_asym_lemma2(w: ComplexValue, q: QParameter) -> Result<LogComplex> {
    ensure_finite(w, "qpoch_asym_lemma2")?;
    if w.re <= 0.0 {
        return Err(Error::Domain {
            op: "qpoch_asym_lemma2",
            reason: "requires Re(w) > 0",
        });
    }
    let tau = q.tau();
    let gap = one_minus_exp_neg(w * (PI * tau));
    let log_gap = principal_log(gap)?;
    if !(log_gap.im > -PI && log_gap.im < PI) {
        return Err(Error::BranchCut {
            op: "qpoch_asym_lemma2",
        });
    }
    let half = ComplexValue::new(0.5, 0.0);
    let l = 0.5 * libm::log(2.0 * PI) + (w - half) * principal_log(w)?
        - PI / (6.0 * tau)
        - log_gamma(w)?
        - (w + half) * log_gap;
    Ok(LogComplex::from_log(l))
}
