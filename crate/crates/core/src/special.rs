//! log Γ through Binet's integral, the dilogarithm and its reflection
//! identity, and the Euler–Maclaurin summand
//! `f(t) = (1/2 − 1/t − t/12 + 1/(e^t − 1)) e^{−tw} / t`.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{ensure_finite, principal_log, ComplexValue};
use crate::quadrature::integrate;

/// `B_{2n} / (2n)!` for `n = 1..=30`.
///
/// These are the Taylor coefficients of
/// `1/(e^t − 1) − 1/t + 1/2 = Σ_{n≥1} B_{2n} t^{2n−1} / (2n)!`.
pub(crate) const BERNOULLI_RATIO: [f64; 30] = [
    8.333_333_333_333_333_333_3e-2,
    -1.388_888_888_888_888_888_9e-3,
    3.306_878_306_878_306_878_3e-5,
    -8.267_195_767_195_767_195_8e-7,
    2.087_675_698_786_809_897_9e-8,
    -5.284_190_138_687_493_184_8e-10,
    1.338_253_653_068_467_883_3e-11,
    -3.389_680_296_322_582_866_8e-13,
    8.586_062_056_277_844_564_1e-15,
    -2.174_868_698_558_061_873e-16,
    5.509_002_828_360_229_515_2e-18,
    -1.395_446_468_581_252_334_1e-19,
    3.534_707_039_629_467_471_7e-21,
    -8.953_517_427_037_546_850_4e-23,
    2.267_952_452_337_683_060_3e-24,
    -5.744_790_668_872_202_445_3e-26,
    1.455_172_475_614_864_901_9e-27,
    -3.685_994_940_665_310_178_2e-29,
    9.336_734_257_095_044_672e-31,
    -2.365_022_415_700_629_934_6e-32,
    5.990_671_762_482_134_304_7e-34,
    -1.517_454_884_468_290_261_7e-35,
    3.843_758_125_454_188_232_2e-37,
    -9.736_353_072_646_691_035_3e-39,
    2.466_247_044_200_680_957_1e-40,
    -6.247_076_741_820_743_693_1e-42,
    1.582_403_024_464_491_429_8e-43,
    -4.008_273_685_948_935_968_5e-45,
    1.015_307_585_556_955_631_2e-46,
    -2.571_804_158_241_871_749_9e-48,
];

const ZETA_2: f64 = PI * PI / 6.0;

/// Below this `t` the Bernoulli series replaces the closed forms, whose
/// terms cancel to `O(t)` (Binet) or `O(t²)` (summand).
const SERIES_SWITCH: f64 = 3.0;

/// Panel budget and absolute accuracy target for the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub max_panels: usize,
    pub target_abs_err: f64,
}

impl QuadratureConfig {
    pub fn new(max_panels: usize, target_abs_err: f64) -> Result<Self> {
        if max_panels < 1 || !target_abs_err.is_finite() || target_abs_err <= 0.0 {
            return Err(Error::Domain {
                op: "QuadratureConfig::new",
                reason: "need max_panels >= 1 and a positive finite target",
            });
        }
        Ok(QuadratureConfig {
            max_panels,
            target_abs_err,
        })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            max_panels: 4096,
            target_abs_err: 1e-15,
        }
    }
}

/// `Σ_{n≥from} B_{2n}/(2n)! · t^{2n−2}` evaluated by Horner in `t²`.
fn bernoulli_tail(t: f64, from: usize) -> f64 {
    let t2 = t * t;
    let mut acc = 0.0;
    for c in BERNOULLI_RATIO[from - 1..].iter().rev() {
        acc = acc * t2 + c;
    }
    acc * libm::pow(t2, (from - 1) as f64)
}

/// `(1/2 − 1/t + 1/(e^t − 1)) / t`, the Binet kernel; tends to 1/12 at 0.
fn binet_kernel(t: f64) -> f64 {
    if t < SERIES_SWITCH {
        bernoulli_tail(t, 1)
    } else {
        (0.5 - 1.0 / t + 1.0 / libm::expm1(t)) / t
    }
}

/// `(1/2 − 1/t − t/12 + 1/(e^t − 1)) / t`; behaves like `−t²/720` at 0.
fn summand_kernel(t: f64) -> f64 {
    if t < SERIES_SWITCH {
        bernoulli_tail(t, 2)
    } else {
        (0.5 - 1.0 / t - t / 12.0 + 1.0 / libm::expm1(t)) / t
    }
}

/// The Euler–Maclaurin summand `f(t; w)`; `f(0) = 0` by continuity.
pub fn binet_summand_f(t: f64, w: ComplexValue) -> ComplexValue {
    if t <= 0.0 {
        return ComplexValue::new(0.0, 0.0);
    }
    (w * -t).exp() * summand_kernel(t)
}

/// Binet's integral `J(w) = ∫₀^∞ (1/2 − 1/t + 1/(e^t − 1)) e^{−tw}/t dt`,
/// so that `log Γ(w) = (w − ½) Log w − w + ½ log 2π + J(w)`.
///
/// The range is cut at `T = 40/Re w` (further out if the target demands);
/// the kernel never exceeds 1/12, which bounds the dropped tail.
pub fn binet_correction(w: ComplexValue, cfg: QuadratureConfig) -> Result<ComplexValue> {
    ensure_finite(w, "binet_correction")?;
    if w.re <= 0.0 {
        return Err(Error::Domain {
            op: "binet_correction",
            reason: "requires Re(w) > 0",
        });
    }
    // tail ≤ e^{−T Re w} / (12 Re w)
    let needed = libm::log(1.0 / (12.0 * cfg.target_abs_err * w.re));
    let cut = if needed > 40.0 { needed } else { 40.0 } / w.re;
    let q = integrate(
        |t| (w * -t).exp() * binet_kernel(t),
        0.0,
        cut,
        cfg.target_abs_err,
        cfg.max_panels,
        "binet_correction",
    )?;
    Ok(q.value)
}

fn nonpositive_integer(w: ComplexValue) -> bool {
    w.im == 0.0 && w.re <= 0.0 && libm::floor(w.re) == w.re
}

/// Stirling main part plus Binet correction, valid for `Re w > 0`.
fn log_gamma_binet(w: ComplexValue, cfg: QuadratureConfig) -> Result<ComplexValue> {
    let half = ComplexValue::new(0.5, 0.0);
    Ok((w - half) * principal_log(w)? - w + 0.5 * libm::log(2.0 * PI) + binet_correction(w, cfg)?)
}

/// log Γ(w).
///
/// Small positive integers are exact. Otherwise `w` is shifted up to
/// `Re w ≥ 4` by the recurrence and the Binet form is used there. The
/// imaginary part is the principal determination on the plane cut along
/// the negative real axis; for negative real `w` it carries multiples of
/// `π` from the shift, so only `exp` of the result is meaningful there.
pub fn log_gamma(w: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(w, "log_gamma")?;
    if nonpositive_integer(w) {
        return Err(Error::Pole { op: "log_gamma" });
    }
    if w.im == 0.0 && w.re >= 1.0 && w.re <= 20.0 && libm::floor(w.re) == w.re {
        let n = w.re as u32;
        let fact: f64 = (1..n).map(|k| k as f64).product();
        return Ok(ComplexValue::new(libm::log(fact), 0.0));
    }
    let shift = if w.re < 4.0 {
        libm::ceil(4.0 - w.re) as usize
    } else {
        0
    };
    let mut acc = log_gamma_binet(w + shift as f64, QuadratureConfig::default())?;
    for j in 0..shift {
        acc -= principal_log(w + j as f64)?;
    }
    Ok(acc)
}

/// `Σ_{n≥1} z^n / n²` for `|z| ≤ 1/2`.
fn dilog_series(z: ComplexValue) -> ComplexValue {
    let mut zn = z;
    let mut sum = z;
    for n in 2..200 {
        zn *= z;
        let term = zn / (n * n) as f64;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// `Li₂` through `u = −Log(1 − z)`: `u − u²/4 + Σ B_{2k} u^{2k+1}/(2k+1)!`.
/// Converges for `|u| < 2π`; used on the part of the disk away from both
/// 0 and 1, where `|u| ≤ 1.72`.
fn dilog_bernoulli(z: ComplexValue) -> Result<ComplexValue> {
    let u = -principal_log(ComplexValue::new(1.0, 0.0) - z)?;
    let u2 = u * u;
    let mut sum = u - u2 * 0.25;
    let mut pow = u;
    for (k, c) in BERNOULLI_RATIO.iter().enumerate() {
        pow *= u2;
        let term = pow * (c / (2 * k + 3) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

/// The dilogarithm on the closed unit disk.
///
/// `|z| ≤ ½`: power series. `|1 − z| ≤ ½` (this covers real `z ∈ (½, 1)`):
/// reflection onto the series at `1 − z`. Elsewhere: Bernoulli series in
/// `−Log(1 − z)`.
pub fn dilog(z: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(z, "dilog")?;
    if z.norm() > 1.0 {
        return Err(Error::Domain {
            op: "dilog",
            reason: "requires |z| <= 1",
        });
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(ComplexValue::new(0.0, 0.0));
    }
    if z.re == 1.0 && z.im == 0.0 {
        return Ok(ComplexValue::new(ZETA_2, 0.0));
    }
    if z.norm() <= 0.5 {
        return Ok(dilog_series(z));
    }
    let w = ComplexValue::new(1.0, 0.0) - z;
    if w.norm() <= 0.5 {
        return Ok(ZETA_2 - principal_log(z)? * principal_log(w)? - dilog_series(w));
    }
    dilog_bernoulli(z)
}

/// Right-hand side of `Li₂(z) = −Li₂(1 − z) + π²/6 − Log z · Log(1 − z)`.
///
/// Defined for `z ∉ {0, 1}` with both `z` and `1 − z` in the closed unit
/// disk.
pub fn dilog_reflect(z: ComplexValue) -> Result<ComplexValue> {
    ensure_finite(z, "dilog_reflect")?;
    let one = ComplexValue::new(1.0, 0.0);
    let w = one - z;
    if (z.re == 0.0 && z.im == 0.0) || (w.re == 0.0 && w.im == 0.0) {
        return Err(Error::Domain {
            op: "dilog_reflect",
            reason: "logarithmic singularity at z = 0 and z = 1",
        });
    }
    if z.norm() > 1.0 || w.norm() > 1.0 {
        return Err(Error::Domain {
            op: "dilog_reflect",
            reason: "requires |z| <= 1 and |1 - z| <= 1",
        });
    }
    Ok(-dilog(w)? + ZETA_2 - principal_log(z)? * principal_log(w)?)
}
