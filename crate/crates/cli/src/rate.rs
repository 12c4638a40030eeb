//! `qgamma rate`: error of a small-τ approximant against the exact
//! evaluation along a geometric τ grid, plus a log-log slope fit.

use clap::ValueEnum;
use serde::Serialize;

use qgamma::error::Error;
use qgamma::theta::{theta1_prime0_log, theta1_series_log, Nome};
use qgamma::{
    one_minus_exp_neg, qgamma_asym_eq23, qgamma_asym_eq24, qgamma_log, qpoch_asym_lemma2,
    qpoch_log, tau_grid, Complex64, LogComplex, QParameter, RateFit, Tolerance, TruncationReport,
};

use crate::error::CliError;
use crate::output::{csv_string, fmt_f64};
use crate::parse::format_complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateFunc {
    /// Γ(w) against Γ_q(w)
    Qgamma23,
    /// Γ(w)·bracket^{w−½} against Γ_q(w)
    Qgamma24,
    /// Small-τ formula for (q^{w+1};q)_∞ against the product
    QpochLemma2,
    /// 2 sin(πx) e^{−π/(2τ)} against θ₁(x | 2i/τ); x = 0 compares θ₁'(0)
    ThetaAsym,
}

impl RateFunc {
    pub fn name(self) -> &'static str {
        match self {
            RateFunc::Qgamma23 => "qgamma23",
            RateFunc::Qgamma24 => "qgamma24",
            RateFunc::QpochLemma2 => "qpoch-lemma2",
            RateFunc::ThetaAsym => "theta-asym",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub tau: f64,
    pub err: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub ref_re: f64,
    pub ref_im: f64,
    pub path: &'static str,
    pub terms_used: usize,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub func: &'static str,
    pub z: String,
    pub rows: Vec<RateRow>,
    /// `None` when any error underflowed to zero.
    pub fit: Option<FitSummary>,
}

/// `|a/b − 1|` from logarithms, so neither value has to be representable.
pub fn relative_error(a: LogComplex, b: LogComplex) -> f64 {
    one_minus_exp_neg(b.ln() - a.ln()).norm()
}

/// One grid point: approximant, exact value and `|exact/approx − 1|`.
pub fn measure(func: RateFunc, z: Complex64, tau: f64, tol: Tolerance) -> Result<RateRow, Error> {
    let q = QParameter::new(tau)?;
    let none = TruncationReport::default();
    let (approx, exact, path, report) = match func {
        RateFunc::Qgamma23 | RateFunc::Qgamma24 => {
            let approx = if func == RateFunc::Qgamma23 {
                qgamma_asym_eq23(z)?
            } else {
                qgamma_asym_eq24(z, tau)?
            };
            let exact = qgamma_log(z, q, tol)?;
            (approx, exact.value, exact.path.as_str(), exact.report)
        }
        RateFunc::QpochLemma2 => {
            let approx = qpoch_asym_lemma2(z, q)?;
            let (exact, report, _) = qpoch_log(q.pow(z + 1.0), q, tol)?;
            let exact = exact.nonzero().ok_or(Error::Domain {
                op: "rate",
                reason: "exact product vanishes",
            })?;
            (approx, exact, "product", report)
        }
        RateFunc::ThetaAsym => {
            let nome = Nome::from_tau(tau)?;
            let (prime, theta) = qgamma::theta1_asym_small_tau(z, tau)?;
            if z.re == 0.0 && z.im == 0.0 {
                (prime, theta1_prime0_log(nome)?, "series", none)
            } else {
                let (exact, report) = theta1_series_log(z, nome)?;
                match (theta.nonzero(), exact.nonzero()) {
                    (Some(a), Some(e)) => (a, e, "series", report),
                    _ => {
                        return Err(Error::Domain {
                            op: "rate",
                            reason: "theta vanishes at this x",
                        })
                    }
                }
            }
        }
    };
    let v = approx.to_complex();
    let r = exact.to_complex();
    Ok(RateRow {
        tau,
        err: relative_error(exact, approx),
        value_re: v.re,
        value_im: v.im,
        ref_re: r.re,
        ref_im: r.im,
        path,
        terms_used: report.terms_used,
        tail_bound: report.tail_bound,
    })
}

pub fn check_grid(tau_start: f64, steps: usize, ratio: f64) -> Result<(), CliError> {
    if !(tau_start.is_finite() && tau_start > 0.0) {
        return Err(CliError::usage("--tau-start must be positive"));
    }
    if steps < 3 {
        return Err(CliError::usage("--steps must be at least 3"));
    }
    if !(ratio.is_finite() && ratio > 1.0) {
        return Err(CliError::usage("--ratio must be greater than 1"));
    }
    Ok(())
}

pub fn run_rate(
    func: RateFunc,
    z: Complex64,
    tau_start: f64,
    steps: usize,
    ratio: f64,
    tol: Tolerance,
) -> Result<RateReport, CliError> {
    check_grid(tau_start, steps, ratio)?;
    let rows = tau_grid(tau_start, steps, ratio)
        .into_iter()
        .map(|t| measure(func, z, t, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.tau, r.err)).collect();
    let underflow = rows.iter().any(|r| r.err == 0.0);
    let fit = RateFit::fit(&pts)
        .ok()
        .filter(|_| !underflow)
        .map(|f| FitSummary {
            slope: f.slope,
            intercept: f.intercept,
            r_squared: f.r_squared,
            excluded: f.excluded,
        });
    Ok(RateReport {
        func: func.name(),
        z: format_complex(z),
        rows,
        fit,
    })
}

pub const RATE_HEADER: [&str; 6] = ["tau", "err", "value_re", "value_im", "ref_re", "ref_im"];

pub fn render_csv(report: &RateReport) -> Result<String, CliError> {
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            [r.tau, r.err, r.value_re, r.value_im, r.ref_re, r.ref_im]
                .iter()
                .map(|&x| fmt_f64(x))
                .collect()
        })
        .collect();
    csv_string(&RATE_HEADER, &rows)
}

pub fn render_summary(report: &RateReport) -> String {
    match &report.fit {
        Some(f) => format!(
            "func={} z={} slope={:.6} intercept={:.6} r_squared={:.6} excluded={}\n",
            report.func, report.z, f.slope, f.intercept, f.r_squared, f.excluded
        ),
        None => format!(
            "func={} z={} fit refused: an error underflowed to 0\n",
            report.func, report.z
        ),
    }
}
