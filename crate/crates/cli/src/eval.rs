//! `qgamma eval`: one function at one point.

use clap::ValueEnum;
use serde::Serialize;

use qgamma::theta::{theta1_prime0_log, theta1_series_log, Nome};
use qgamma::{
    dilog, log_gamma, qgamma_asym_eq23, qgamma_asym_eq24, qgamma_log, qpoch_log, qpoch_log_series,
    Complex64, LogComplex, LogValue, PochhammerStrategy, QParameter, Tolerance, TruncationReport,
};

use crate::error::CliError;
use crate::parse::format_complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFunc {
    /// Γ_q(z), production path
    Qgamma,
    /// Γ(z), the τ-independent approximant of Γ_q(z)
    QgammaAsym23,
    /// Γ(z) times the small-τ bracket
    QgammaAsym24,
    /// (z;q)_∞, strategy chosen automatically
    Qpoch,
    /// (z;q)_∞ by the logarithmic series, |z| < 1
    QpochSeries,
    /// θ₁(z | 2i/τ)
    Theta1,
    /// θ₁'(0 | 2i/τ); z is ignored
    Theta1Prime0,
    /// Li₂(z)
    Dilog,
    /// Γ(z) via Binet's integral; log_mag and phase carry log Γ(z)
    Loggamma,
}

impl EvalFunc {
    pub fn name(self) -> &'static str {
        match self {
            EvalFunc::Qgamma => "qgamma",
            EvalFunc::QgammaAsym23 => "qgamma-asym23",
            EvalFunc::QgammaAsym24 => "qgamma-asym24",
            EvalFunc::Qpoch => "qpoch",
            EvalFunc::QpochSeries => "qpoch-series",
            EvalFunc::Theta1 => "theta1",
            EvalFunc::Theta1Prime0 => "theta1-prime0",
            EvalFunc::Dilog => "dilog",
            EvalFunc::Loggamma => "loggamma",
        }
    }

    pub fn needs_tau(self) -> bool {
        !matches!(
            self,
            EvalFunc::QgammaAsym23 | EvalFunc::Dilog | EvalFunc::Loggamma
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRecord {
    pub func: &'static str,
    pub z: String,
    pub tau: Option<f64>,
    pub q: Option<f64>,
    pub value_re: f64,
    pub value_im: f64,
    /// `None` when the value is exactly zero.
    pub log_mag: Option<f64>,
    pub phase: Option<f64>,
    pub path: &'static str,
    pub terms_used: usize,
    pub tail_bound: f64,
}

fn strategy_name(s: PochhammerStrategy) -> &'static str {
    match s {
        PochhammerStrategy::Product => "product",
        PochhammerStrategy::Series => "series",
    }
}

pub fn require_tau(func_name: &str, tau: Option<f64>) -> Result<f64, CliError> {
    tau.ok_or_else(|| CliError::usage(format!("`{func_name}` needs --tau")))
}

pub fn run_eval(
    func: EvalFunc,
    z: Complex64,
    tau: Option<f64>,
    tol: Tolerance,
) -> Result<EvalRecord, CliError> {
    let tau = if func.needs_tau() {
        Some(require_tau(func.name(), tau)?)
    } else {
        tau
    };
    let qp = match tau {
        Some(t) => Some(QParameter::new(t).map_err(|e| CliError::usage(e.to_string()))?),
        None => None,
    };
    let qp_req = || qp.expect("tau checked above");
    let none = TruncationReport::default();

    let (value, path, report): (LogValue, &'static str, TruncationReport) = match func {
        EvalFunc::Qgamma => {
            let r = qgamma_log(z, qp_req(), tol)?;
            (r.value.into(), r.path.as_str(), r.report)
        }
        EvalFunc::QgammaAsym23 => (qgamma_asym_eq23(z)?.into(), "asymptotic", none),
        EvalFunc::QgammaAsym24 => (
            qgamma_asym_eq24(z, qp_req().tau())?.into(),
            "asymptotic",
            none,
        ),
        EvalFunc::Qpoch => {
            let (v, rep, s) = qpoch_log(z, qp_req(), tol)?;
            (v, strategy_name(s), rep)
        }
        EvalFunc::QpochSeries => {
            let (v, rep) = qpoch_log_series(z, qp_req(), tol)?;
            (v.into(), "series", rep)
        }
        EvalFunc::Theta1 => {
            let (v, rep) = theta1_series_log(z, Nome::from_tau(qp_req().tau())?)?;
            (v, "series", rep)
        }
        EvalFunc::Theta1Prime0 => (
            theta1_prime0_log(Nome::from_tau(qp_req().tau())?)?.into(),
            "series",
            none,
        ),
        EvalFunc::Dilog => {
            let v = dilog(z)?;
            let lv = match LogComplex::from_complex(v) {
                Some(l) => LogValue::NonZero(l),
                None => LogValue::Zero,
            };
            (lv, "direct", none)
        }
        EvalFunc::Loggamma => (LogComplex::from_log(log_gamma(z)?).into(), "binet", none),
    };

    let v = value.to_complex();
    let (log_mag, phase) = match value {
        LogValue::Zero => (None, None),
        LogValue::NonZero(l) => (Some(l.log_mag()), Some(l.phase())),
    };
    Ok(EvalRecord {
        func: func.name(),
        z: format_complex(z),
        tau: qp.map(|q| q.tau()),
        q: qp.map(|q| q.q()),
        value_re: v.re,
        value_im: v.im,
        log_mag,
        phase,
        path,
        terms_used: report.terms_used,
        tail_bound: report.tail_bound,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:.16e}"))
}

pub fn render_text(r: &EvalRecord) -> String {
    format!(
        "func={}\nz={}\ntau={}\nq={}\nvalue={:.16e}{:+.16e}i\nlog_mag={}\nphase={}\npath={}\nterms_used={}\ntail_bound={:.3e}\n",
        r.func,
        r.z,
        r.tau.map_or_else(|| "none".to_string(), |t| t.to_string()),
        opt(r.q),
        r.value_re,
        r.value_im,
        r.log_mag.map_or_else(|| "-inf".to_string(), |v| format!("{v:.16e}")),
        opt(r.phase),
        r.path,
        r.terms_used,
        r.tail_bound,
    )
}
