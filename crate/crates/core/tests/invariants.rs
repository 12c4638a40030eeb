use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use qgamma::pochhammer::qpoch_log_product;
use qgamma::theta::{theta1_product_log, theta1_series_log};
use qgamma::{
    binet_summand_f, complex_pow, dilog, dilog_reflect, log_gamma, one_minus_exp_neg,
    principal_log, qgamma_log, qgamma_reflect_theta, qpoch_log_series, theta1_series, Complex64,
    LogComplex, LogValue, Nome, QParameter, Tolerance,
};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x9a3f_11c5),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn rel_log(a: LogComplex, b: LogComplex) -> f64 {
    one_minus_exp_neg(b.ln() - a.ln()).norm()
}

fn rel_logvalue(a: LogValue, b: LogValue) -> f64 {
    match (a, b) {
        (LogValue::Zero, LogValue::Zero) => 0.0,
        (LogValue::NonZero(x), LogValue::NonZero(y)) => rel_log(x, y),
        _ => f64::INFINITY,
    }
}

fn polar(mag: f64, arg: f64) -> Complex64 {
    Complex64::from_polar(mag, arg)
}

fn not_near_pole(z: Complex64) -> bool {
    !(z.re < 0.5 && z.im.abs() < 0.02 && (z.re - z.re.round()).abs() < 0.02)
}

proptest! {
    #![proptest_config(cfg(10_000))]

    #[test]
    fn log_round_trip(lm in -8.0f64..8.0, arg in -PI..PI) {
        let z = polar(10f64.powf(lm), arg);
        let back = principal_log(z).unwrap().exp();
        prop_assert!(rel(back, z) <= 1e-14, "z={z} back={back}");
    }
}

proptest! {
    #![proptest_config(cfg(1_000))]

    #[test]
    fn pow_identities(lm in -8.0f64..8.0, arg in -PI..PI) {
        let z = polar(10f64.powf(lm), arg);
        let one = complex_pow(z, c(1.0, 0.0)).unwrap().to_complex();
        prop_assert!(rel(one, z) <= 1e-14);
        prop_assert_eq!(complex_pow(z, c(0.0, 0.0)).unwrap().to_complex(), c(1.0, 0.0));
    }

    #[test]
    fn one_minus_exp_neg_complements(lm in -14.0f64..1.0, arg in -PI..PI) {
        let a = polar(10f64.powf(lm), arg);
        let e = (-a).exp();
        let s = one_minus_exp_neg(a) + e;
        // measured against the larger of the two summands
        prop_assert!((s - 1.0).norm() <= 1e-13 * e.norm().max(1.0), "a={a}");
    }

    #[test]
    fn log_complex_multiplication(
        l1 in -300.0f64..300.0, p1 in -PI..PI,
        l2 in -300.0f64..300.0, p2 in -PI..PI,
    ) {
        prop_assume!((l1 + l2).abs() < 700.0 && l1.abs() < 700.0 && l2.abs() < 700.0);
        let a = LogComplex::new(l1, p1);
        let b = LogComplex::new(l2, p2);
        let direct = a.to_complex() * b.to_complex();
        let prod = (a * b).to_complex();
        prop_assert!(rel(prod, direct) <= 1e-13);
        let p = (a * b).phase();
        prop_assert!(p > -PI && p <= PI);
    }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn pochhammer_series_matches_product(r in 0.0f64..=0.95, arg in -PI..PI, qv in 0.05f64..=0.95) {
        let z = polar(r, arg);
        let q = QParameter::from_q(qv).unwrap();
        let (s, _) = qpoch_log_series(z, q, Tolerance::default()).unwrap();
        let (p, _) = qpoch_log_product(z, q, Tolerance::default()).unwrap();
        prop_assert!(rel_logvalue(s.into(), p) <= 1e-12);
    }

    #[test]
    fn pochhammer_factorisation(wr in 0.01f64..6.0, wi in -4.0f64..4.0, tau in 0.05f64..2.0) {
        let w = c(wr, wi);
        let q = QParameter::new(tau).unwrap();
        let tol = Tolerance::default();
        let (lhs, _) = qpoch_log_product(q.pow(w), q, tol).unwrap();
        let (tail, _) = qpoch_log_product(q.pow(w) * q.q(), q, tol).unwrap();
        let first = LogComplex::from_complex(one_minus_exp_neg(w * (PI * tau))).unwrap();
        prop_assert!(rel_logvalue(lhs, LogValue::NonZero(first) * tail) <= 1e-12);
    }

    #[test]
    fn tail_bound_is_honest(ar in -2.0f64..2.0, ai in -2.0f64..2.0, qv in 0.1f64..0.95, k in 2i32..10) {
        let a = c(ar, ai);
        let q = QParameter::from_q(qv).unwrap();
        let loose = Tolerance::relative(10f64.powi(-k)).unwrap();
        let tight = Tolerance::relative(0.5 * 10f64.powi(-k)).unwrap();
        let (v1, r1) = qpoch_log_product(a, q, loose).unwrap();
        let (v2, _) = qpoch_log_product(a, q, tight).unwrap();
        if let (LogValue::NonZero(x), LogValue::NonZero(y)) = (v1, v2) {
            let d = (x.ln() - y.ln()).re.abs();
            prop_assert!(d <= r1.tail_bound + 1e-13, "d={d} bound={}", r1.tail_bound);
        }
    }

    #[test]
    fn dilog_reflection_real(x in 0.01f64..0.99) {
        let z = c(x, 0.0);
        prop_assert!((dilog(z).unwrap() - dilog_reflect(z).unwrap()).norm() <= 1e-12);
    }

    #[test]
    fn dilog_reflection_complex(r in 0.01f64..=0.9, arg in -PI..PI) {
        let z = polar(r, arg);
        prop_assume!((c(1.0, 0.0) - z).norm() <= 1.0);
        prop_assert!((dilog(z).unwrap() - dilog_reflect(z).unwrap()).norm() <= 1e-12);
    }

    #[test]
    fn log_gamma_recurrence(wr in 0.01f64..10.0, wi in -10.0f64..10.0) {
        let w = c(wr, wi);
        let lhs = log_gamma(w + 1.0).unwrap().exp();
        let rhs = w * log_gamma(w).unwrap().exp();
        prop_assert!(rel(lhs, rhs) <= 1e-12, "w={w}");
    }

    #[test]
    fn gamma_reflection(x in -5.0f64..5.0) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let g = (log_gamma(c(x, 0.0)).unwrap() + log_gamma(c(1.0 - x, 0.0)).unwrap()).exp();
        let v = g * (PI * x).sin() / PI;
        prop_assert!((v - 1.0).norm() <= 1e-12, "x={x} v={v}");
    }

    #[test]
    fn summand_is_small_near_zero(t in 1e-6f64..=0.1, wr in 0.1f64..10.0, wi in -5.0f64..5.0) {
        let w = c(wr, wi);
        let f = binet_summand_f(t, w).norm();
        prop_assert!(f <= t * t / 700.0 * (-t * wr).exp());
    }

    #[test]
    fn theta_odd(vr in -2.0f64..2.0, vi in -0.3f64..0.3, p in 1e-4f64..0.5) {
        let v = c(vr, vi);
        let nome = Nome::from_real_p(p).unwrap();
        let a = theta1_series(v, nome).unwrap();
        let b = theta1_series(-v, nome).unwrap();
        prop_assert!((a + b).norm() <= 1e-13 * a.norm());
    }

    #[test]
    fn qgamma_functional_equation(zr in -3.0f64..5.0, zi in -1.0f64..1.0, pick in 0usize..3) {
        let z = c(zr, zi);
        prop_assume!(not_near_pole(z) && not_near_pole(z + 1.0));
        let q = QParameter::from_q([0.3, 0.7, 0.95][pick]).unwrap();
        let tol = Tolerance::default();
        let lhs = qgamma_log(z + 1.0, q, tol).unwrap().value;
        let rhs = qgamma_log(z, q, tol).unwrap().value;
        let factor = LogComplex::from_complex((c(1.0, 0.0) - q.pow(z)) / q.one_minus_q()).unwrap();
        prop_assert!(rel_log(rhs * factor, lhs) <= 1e-12, "z={z}");
    }

    #[test]
    fn reflection_path_on_strip(x in 0.1f64..0.9, pick in 0usize..2) {
        let q = QParameter::new([0.5, 1.0][pick]).unwrap();
        let a = qgamma_reflect_theta(x, q).unwrap();
        let b = qgamma_log(c(x, 0.0), q, Tolerance::default()).unwrap().value;
        prop_assert!(rel_log(a, b) <= 1e-9);
    }
}

#[test]
fn theta_series_matches_product_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let v = c(0.05 + 0.1 * i as f64, -0.1 + 0.2 * (i % 5) as f64 / 4.0);
        for p in [1e-4, 0.01, 0.1, 0.3, 0.5] {
            let nome = Nome::from_real_p(p).unwrap();
            let (s, _) = theta1_series_log(v, nome).unwrap();
            let pr = theta1_product_log(v, nome).unwrap();
            worst = worst.max(rel_logvalue(s, pr));
        }
    }
    assert!(worst <= 1e-12, "worst={worst}");
}

#[test]
fn theta_integer_zeros_are_exact() {
    for p in [0.01, 0.3, 0.5] {
        let nome = Nome::from_real_p(p).unwrap();
        for n in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            assert_eq!(theta1_series(c(n, 0.0), nome).unwrap(), c(0.0, 0.0));
        }
    }
}
