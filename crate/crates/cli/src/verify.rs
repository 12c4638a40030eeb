//! `qgamma verify`: seeded identity suites.
//!
//! Every check yields a residual and the threshold it is held to. The
//! threshold is `--tol` except for the defect suite, whose residual is the
//! ratio `|S − I| / bound` and is compared against 1.05.

use std::f64::consts::PI;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qgamma::error::Error;
use qgamma::pochhammer::qpoch_log_product;
use qgamma::theta::{theta1_product_log, theta1_series_log};
use qgamma::{
    dilog, dilog_reflect, euler_maclaurin_defect, log_gamma, one_minus_exp_neg, qgamma_log,
    qgamma_reflect_theta, qpoch_log_series, qqq_cubed_theta, theta1_transform_check,
    triple_pochhammer_theta, Complex64, LogComplex, LogValue, Nome, QParameter, QuadratureConfig,
    Tolerance,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pochhammer,
    Theta,
    Dilog,
    Binet,
    Qgamma,
    Defect,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Pochhammer => "pochhammer",
            Suite::Theta => "theta",
            Suite::Dilog => "dilog",
            Suite::Binet => "binet",
            Suite::Qgamma => "qgamma",
            Suite::Defect => "defect",
            Suite::All => "all",
        }
    }

    const EACH: [Suite; 6] = [
        Suite::Pochhammer,
        Suite::Theta,
        Suite::Dilog,
        Suite::Binet,
        Suite::Qgamma,
        Suite::Defect,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite_name: &'static str,
    pub checks_run: usize,
    pub checks_failed: usize,
    /// Largest `residual / threshold` over all checks; above 1 means failure.
    pub worst_residual: f64,
    pub details: Vec<CheckRecord>,
}

const DEFECT_SLACK: f64 = 1.05;

struct Checks {
    suite: &'static str,
    records: Vec<CheckRecord>,
}

impl Checks {
    fn new(suite: &'static str) -> Self {
        Checks {
            suite,
            records: Vec::new(),
        }
    }

    fn push(&mut self, name: String, residual: Result<f64, Error>, threshold: f64) {
        let rec = match residual {
            Ok(r) => CheckRecord {
                suite: self.suite,
                name,
                residual: r,
                threshold,
                passed: r <= threshold,
                error: None,
            },
            Err(e) => CheckRecord {
                suite: self.suite,
                name,
                residual: f64::INFINITY,
                threshold,
                passed: false,
                error: Some(format!("{}: {}", e.name(), e)),
            },
        };
        self.records.push(rec);
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `|a/b − 1|` in log space.
fn rel_log(a: LogComplex, b: LogComplex) -> f64 {
    one_minus_exp_neg(b.ln() - a.ln()).norm()
}

fn rel_logvalue(a: LogValue, b: LogValue) -> f64 {
    match (a, b) {
        (LogValue::Zero, LogValue::Zero) => 0.0,
        (LogValue::NonZero(x), LogValue::NonZero(y)) => rel_log(x, y),
        _ => 1.0,
    }
}

fn in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    let a = rng.random_range(-PI..PI);
    Complex64::from_polar(r, a)
}

fn suite_pochhammer(rng: &mut ChaCha8Rng, tol: f64, out: &mut Checks) {
    let ev = Tolerance::default();
    for k in 0..200 {
        let z = in_disk(rng, 0.95);
        let qv = rng.random_range(0.05..0.95);
        let r = (|| {
            let q = QParameter::from_q(qv)?;
            let (s, _) = qpoch_log_series(z, q, ev)?;
            let (p, _) = qpoch_log_product(z, q, ev)?;
            Ok(rel_logvalue(s.into(), p))
        })();
        out.push(format!("series-vs-product[{k}]"), r, tol);
    }
    for k in 0..20 {
        let a = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let qv = rng.random_range(0.05..0.95);
        let r = (|| {
            let q = QParameter::from_q(qv)?;
            let (lhs, _) = qpoch_log_product(a, q, ev)?;
            let (tail, _) = qpoch_log_product(a * qv, q, ev)?;
            let first =
                LogComplex::from_complex(c(1.0, 0.0) - a).map_or(LogValue::Zero, LogValue::NonZero);
            Ok(rel_logvalue(lhs, first * tail))
        })();
        out.push(format!("factor-out-first[{k}]"), r, tol);
    }
}

fn suite_theta(rng: &mut ChaCha8Rng, tol: f64, out: &mut Checks) {
    let ev = Tolerance::default();
    let mut k = 0;
    while k < 50 {
        let v = c(rng.random_range(-1.0..1.0), rng.random_range(-0.3..0.3));
        let p: f64 = rng.random_range(0.02..0.5);
        // the product needs |p² e^{±2πiv}| < 1; keep clear of the edge
        if p * p * (2.0 * PI * v.im.abs()).exp() > 0.5 {
            continue;
        }
        let r = (|| {
            let nome = Nome::from_real_p(p)?;
            let (s, _) = theta1_series_log(v, nome)?;
            let pr = theta1_product_log(v, nome)?;
            Ok(rel_logvalue(s, pr))
        })();
        out.push(format!("series-vs-product[{k}]"), r, tol);
        k += 1;
    }
    for tau in [0.5, 1.0, 2.0, 4.0] {
        for v in [0.1, 0.25, 0.4] {
            let r = (|| theta1_transform_check(c(v, 0.0), Nome::from_tau(tau)?.t()))();
            out.push(format!("modular-transform[tau={tau},v={v}]"), r, tol);
        }
    }
    for tau in [0.5, 0.75, 1.0, 1.5, 2.0] {
        let r = (|| {
            let q = QParameter::new(tau)?;
            let (qq, _) = qpoch_log_product(c(q.q(), 0.0), q, ev)?;
            let qq = qq.nonzero().expect("(q;q) > 0");
            let direct = qq * qq * qq;
            Ok(rel_log(qqq_cubed_theta(q)?, direct))
        })();
        out.push(format!("qqq-cubed[tau={tau}]"), r, tol);
        for x in [0.3, 0.5, 0.7] {
            let r = (|| {
                let q = QParameter::new(tau)?;
                let x = c(x, 0.0);
                let mut direct = LogValue::NonZero(LogComplex::ONE);
                for a in [c(q.q(), 0.0), q.pow(x + 1.0), q.pow(c(1.0, 0.0) - x)] {
                    direct = direct * qpoch_log_product(a, q, ev)?.0;
                }
                Ok(rel_logvalue(triple_pochhammer_theta(x, q)?.into(), direct))
            })();
            out.push(format!("triple-pochhammer[tau={tau},x={x}]"), r, tol);
        }
    }
}

fn suite_dilog(rng: &mut ChaCha8Rng, tol: f64, out: &mut Checks) {
    for k in 0..100 {
        let z = c(rng.random_range(0.01..0.99), 0.0);
        let r = (|| Ok((dilog(z)? - dilog_reflect(z)?).norm()))();
        out.push(format!("reflection-real[{k}]"), r, tol);
    }
    let mut k = 0;
    while k < 100 {
        let z = in_disk(rng, 0.9);
        if (c(1.0, 0.0) - z).norm() > 1.0 || z.norm() < 1e-3 {
            continue;
        }
        let r = (|| Ok((dilog(z)? - dilog_reflect(z)?).norm()))();
        out.push(format!("reflection-complex[{k}]"), r, tol);
        k += 1;
    }
}

fn suite_binet(rng: &mut ChaCha8Rng, tol: f64, out: &mut Checks) {
    let gamma_rel = |w: Complex64, expect: f64| -> Result<f64, Error> {
        Ok((log_gamma(w)?.exp() / expect - 1.0).norm())
    };
    out.push("gamma(1)".into(), gamma_rel(c(1.0, 0.0), 1.0), tol);
    out.push("gamma(5)".into(), gamma_rel(c(5.0, 0.0), 24.0), tol);
    out.push("gamma(1/2)".into(), gamma_rel(c(0.5, 0.0), PI.sqrt()), tol);
    let abs_gi = (PI / PI.sinh()).sqrt();
    let r = (|| Ok((log_gamma(c(0.0, 1.0))?.re.exp() / abs_gi - 1.0).abs()))();
    out.push("abs-gamma(i)".into(), r, tol);
    for k in 0..40 {
        let w = c(rng.random_range(0.2..12.0), rng.random_range(-6.0..6.0));
        let r = (|| {
            let d = log_gamma(w + 1.0)? - log_gamma(w)? - w.ln();
            Ok(one_minus_exp_neg(d).norm())
        })();
        out.push(format!("recurrence[{k}]"), r, tol);
    }
}

fn near_pole(z: Complex64) -> bool {
    z.re < 0.5 && z.im.abs() < 0.05 && (z.re - z.re.round()).abs() < 0.05
}

fn suite_qgamma(rng: &mut ChaCha8Rng, tol: f64, out: &mut Checks) {
    let mut k = 0;
    while k < 100 {
        let z = c(rng.random_range(-3.0..5.0), rng.random_range(-1.0..1.0));
        if near_pole(z) || near_pole(z + 1.0) {
            continue;
        }
        let qv = [0.3, 0.7, 0.95][k % 3];
        let r = (|| {
            let q = QParameter::from_q(qv)?;
            let lhs = qgamma_log(z + 1.0, q, Tolerance::default())?.value;
            let rhs = qgamma_log(z, q, Tolerance::default())?.value;
            let factor = LogComplex::from_complex((c(1.0, 0.0) - q.pow(z)) / q.one_minus_q())
                .ok_or(Error::Pole { op: "qgamma_log" })?;
            Ok(rel_log(rhs * factor, lhs))
        })();
        out.push(format!("functional-equation[{k}]"), r, tol);
        k += 1;
    }
    for tau in [0.5, 1.0] {
        let mut xs = vec![-0.5, 0.3, 0.7];
        for _ in 0..10 {
            xs.push(rng.random_range(0.1..0.9));
        }
        for x in xs {
            let r = (|| {
                let q = QParameter::new(tau)?;
                let a = qgamma_reflect_theta(x, q)?;
                let b = qgamma_log(c(x, 0.0), q, Tolerance::default())?.value;
                Ok(rel_log(a, b))
            })();
            out.push(format!("reflection-path[tau={tau},x={x}]"), r, tol);
        }
    }
}

fn suite_defect(out: &mut Checks) {
    for w in [1.0, 2.0] {
        for tau in [0.1, 0.05, 0.025] {
            let r = (|| {
                let d = euler_maclaurin_defect(c(w, 0.0), tau, QuadratureConfig::default())?;
                Ok(d.defect / d.bound)
            })();
            out.push(
                format!("defect-within-bound[w={w},tau={tau}]"),
                r,
                DEFECT_SLACK,
            );
        }
    }
}

fn run_one(suite: Suite, tol: f64, seed: u64) -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Checks::new(suite.name());
    match suite {
        Suite::Pochhammer => suite_pochhammer(&mut rng, tol, &mut out),
        Suite::Theta => suite_theta(&mut rng, tol, &mut out),
        Suite::Dilog => suite_dilog(&mut rng, tol, &mut out),
        Suite::Binet => suite_binet(&mut rng, tol, &mut out),
        Suite::Qgamma => suite_qgamma(&mut rng, tol, &mut out),
        Suite::Defect => suite_defect(&mut out),
        Suite::All => unreachable!(),
    }
    out.records
}

/// Run a suite. `All` runs every suite with the same seed, so each block
/// of its output matches the corresponding single-suite run.
pub fn run_verify(suite: Suite, tol: f64, seed: u64) -> Result<SuiteReport, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let details: Vec<CheckRecord> = if suite == Suite::All {
        Suite::EACH
            .iter()
            .flat_map(|&s| run_one(s, tol, seed))
            .collect()
    } else {
        run_one(suite, tol, seed)
    };
    let checks_failed = details.iter().filter(|r| !r.passed).count();
    let worst_residual = details
        .iter()
        .map(|r| r.residual / r.threshold)
        .fold(0.0, f64::max);
    Ok(SuiteReport {
        suite_name: suite.name(),
        checks_run: details.len(),
        checks_failed,
        worst_residual,
        details,
    })
}

pub fn render_text(report: &SuiteReport) -> String {
    let mut s = String::new();
    for r in &report.details {
        s.push_str(&format!(
            "{} {} {} residual={:.3e} threshold={:.1e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite,
            r.name,
            r.residual,
            r.threshold
        ));
        if let Some(e) = &r.error {
            s.push_str(&format!(" error=\"{e}\""));
        }
        s.push('\n');
    }
    s.push_str(&format!(
        "suite={} checks_run={} checks_failed={} worst_residual={:.3e}\n",
        report.suite_name, report.checks_run, report.checks_failed, report.worst_residual
    ));
    s
}
