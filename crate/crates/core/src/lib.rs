//! q-Gamma function and friends, with the q → 1⁻ asymptotics.
//!
//! Everything here is pure `f64` arithmetic and runs without `std`
//! (only `alloc` is needed, for rate fits and the adaptive quadrature
//! work list). The crate covers:
//!
//! - [`numerics`]: principal-branch logarithms and powers, the
//!   cancellation-free `1 − e^{−a}`, and [`LogComplex`], a
//!   `(log-magnitude, phase)` carrier for values that would under- or
//!   overflow `f64`.
//! - [`pochhammer`]: `(a;q)_∞` by direct product and by the log-series,
//!   plus the small-τ approximant of `(q^{w+1};q)_∞`.
//! - [`special`]: log Γ through Binet's integral, the dilogarithm with its
//!   reflection identity, and the Euler–Maclaurin summand.
//! - [`theta`]: θ₁ as a sine series and as a triple product, the modular
//!   transformation, and the theta forms of `(q,q^{1+x},q^{1−x};q)_∞` and
//!   `(q;q)³_∞`.
//! - [`qgamma`]: Γ_q by definition, the two small-τ approximants, the
//!   theta-reflection route and the Euler–Maclaurin defect report.
//! - [`rate`]: least-squares convergence order on `(log τ, log err)`.
//!
//! The base is always parameterised as `q = e^{−πτ}` with `τ > 0`.
//!
//! ```
//! use qgamma::{qgamma_log, Complex64, QParameter, Tolerance};
//!
//! let q = QParameter::new(0.1).unwrap();
//! let r = qgamma_log(Complex64::new(2.0, 0.0), q, Tolerance::default()).unwrap();
//! assert!((r.value.to_complex().re - 1.0).abs() < 1e-12);
//! ```

#![no_std]
#![deny(unsafe_code)]
#![allow(clippy::excessive_precision)]

extern crate alloc;
#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod error;
pub mod numerics;
pub mod pochhammer;
pub mod qgamma;
pub mod rate;
pub mod special;
pub mod theta;

mod quadrature;

pub use error::{Error, Result};
pub use numerics::{
    complex_pow, one_minus_exp_neg, principal_log, ComplexValue, LogComplex, LogValue, Tolerance,
};
pub use pochhammer::{
    qpoch_asym_lemma2, qpoch_log, qpoch_log_product, qpoch_log_series, PochhammerStrategy,
    QParameter, TruncationReport,
};
pub use qgamma::{
    euler_maclaurin_defect, qgamma_asym_eq23, qgamma_asym_eq24, qgamma_log, qgamma_reflect_theta,
    qgamma_reflection_product_theta, qgamma_with_path, DefectReport, QGammaPath, QGammaResult,
};
pub use rate::{tau_grid, RateFit};
pub use special::{
    binet_correction, binet_summand_f, dilog, dilog_reflect, log_gamma, QuadratureConfig,
};
pub use theta::{
    qqq_cubed_theta, theta1_asym_small_tau, theta1_prime0, theta1_product, theta1_series,
    theta1_transform_check, triple_pochhammer_theta, Nome,
};

// Re-exported so downstream crates name the same complex type.
pub use num_complex::Complex64;
