//! Adaptive composite Gauss–Legendre quadrature for complex integrands.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{CompensatedSum, ComplexValue};

// 20-point Gauss–Legendre rule on [−1, 1].
const GL_NODES: [f64; 20] = [
    -0.993_128_599_185_094_924_79,
    -0.963_971_927_277_913_791_27,
    -0.912_234_428_251_325_905_87,
    -0.839_116_971_822_218_823_39,
    -0.746_331_906_460_150_792_61,
    -0.636_053_680_726_515_025_45,
    -0.510_867_001_950_827_098,
    -0.373_706_088_715_419_560_67,
    -0.227_785_851_141_645_078_08,
    -0.076_526_521_133_497_333_755,
    0.076_526_521_133_497_333_755,
    0.227_785_851_141_645_078_08,
    0.373_706_088_715_419_560_67,
    0.510_867_001_950_827_098,
    0.636_053_680_726_515_025_45,
    0.746_331_906_460_150_792_61,
    0.839_116_971_822_218_823_39,
    0.912_234_428_251_325_905_87,
    0.963_971_927_277_913_791_27,
    0.993_128_599_185_094_924_79,
];
const GL_WEIGHTS: [f64; 20] = [
    0.017_614_007_139_152_118_312,
    0.040_601_429_800_386_941_331,
    0.062_672_048_334_109_063_57,
    0.083_276_741_576_704_748_725,
    0.101_930_119_817_240_435_04,
    0.118_194_531_961_518_417_31,
    0.131_688_638_449_176_626_9,
    0.142_096_109_318_382_051_33,
    0.149_172_986_472_603_746_79,
    0.152_753_387_130_725_850_7,
    0.152_753_387_130_725_850_7,
    0.149_172_986_472_603_746_79,
    0.142_096_109_318_382_051_33,
    0.131_688_638_449_176_626_9,
    0.118_194_531_961_518_417_31,
    0.101_930_119_817_240_435_04,
    0.083_276_741_576_704_748_725,
    0.062_672_048_334_109_063_57,
    0.040_601_429_800_386_941_331,
    0.017_614_007_139_152_118_312,
];

const INITIAL_PANELS: usize = 8;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Quadrature {
    pub value: ComplexValue,
    pub abs_err: f64,
}

/// Rule value and the matching sum of |f| (scale for the rounding floor).
fn gl_panel<F: Fn(f64) -> ComplexValue>(f: &F, a: f64, b: f64) -> (ComplexValue, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = ComplexValue::new(0.0, 0.0);
    let mut mag = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let v = f(mid + half * x);
        acc += v * *w;
        mag += w * v.norm();
    }
    (acc * half, mag * libm::fabs(half))
}

/// Integrate `f` over `[a, b]` to absolute error `target`.
///
/// Each panel is accepted once the rule on the panel and on its two halves
/// agree to within the panel's share of `target` (or to rounding level).
/// `max_panels` caps the number of accepted panels.
pub(crate) fn integrate<F: Fn(f64) -> ComplexValue>(
    f: F,
    a: f64,
    b: f64,
    target: f64,
    max_panels: usize,
    op: &'static str,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: ComplexValue::new(0.0, 0.0),
            abs_err: 0.0,
        });
    }
    let width = (b - a) / INITIAL_PANELS as f64;
    let mut stack: Vec<(f64, f64, ComplexValue, f64, u32)> = Vec::new();
    for i in (0..INITIAL_PANELS).rev() {
        let lo = a + width * i as f64;
        let hi = if i + 1 == INITIAL_PANELS {
            b
        } else {
            a + width * (i + 1) as f64
        };
        let (whole, _) = gl_panel(&f, lo, hi);
        stack.push((lo, hi, whole, target / INITIAL_PANELS as f64, 0));
    }

    let mut total = CompensatedSum::new();
    let mut abs_err = 0.0;
    let mut accepted = 0usize;
    while let Some((lo, hi, whole, share, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, lmag) = gl_panel(&f, lo, mid);
        let (right, rmag) = gl_panel(&f, mid, hi);
        let refined = left + right;
        let diff = (refined - whole).norm();
        let floor = 64.0 * f64::EPSILON * (lmag + rmag);
        if diff <= share || diff <= floor || depth >= MAX_DEPTH {
            total.add(refined);
            abs_err += diff;
            accepted += 1;
            if accepted > max_panels {
                return Err(Error::NonConvergence {
                    op,
                    panels: max_panels,
                });
            }
        } else {
            if stack.len() + accepted >= max_panels {
                return Err(Error::NonConvergence {
                    op,
                    panels: max_panels,
                });
            }
            // right pushed first so panels are consumed left to right
            stack.push((mid, hi, right, 0.5 * share, depth + 1));
            stack.push((lo, mid, left, 0.5 * share, depth + 1));
        }
    }
    Ok(Quadrature {
        value: total.value(),
        abs_err,
    })
}
