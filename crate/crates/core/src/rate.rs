//! Convergence order from `(τ, err)` samples.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Least-squares line through `(ln τ, ln err)`; `slope` is the empirical
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Every supplied point, including any excluded from the fit.
    pub points: Vec<(f64, f64)>,
    /// Points left out because `err` was not positive.
    pub excluded: usize,
}

impl RateFit {
    /// Fit `ln err = slope · ln τ + intercept`. Points with `err ≤ 0` (or a
    /// non-positive τ) are skipped and counted in `excluded`; at least
    /// three usable points are required.
    pub fn fit(points: &[(f64, f64)]) -> Result<RateFit> {
        let usable: Vec<(f64, f64)> = points
            .iter()
            .filter(|(t, e)| *t > 0.0 && *e > 0.0 && t.is_finite() && e.is_finite())
            .map(|&(t, e)| (libm::log(t), libm::log(e)))
            .collect();
        if usable.len() < 3 {
            return Err(Error::InsufficientData {
                needed: 3,
                got: usable.len(),
            });
        }
        let n = usable.len() as f64;
        let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
        let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = usable.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = usable.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
        if sxx == 0.0 {
            return Err(Error::Domain {
                op: "RateFit::fit",
                reason: "all tau values coincide",
            });
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss_res: f64 = usable
            .iter()
            .map(|p| {
                let r = p.1 - (slope * p.0 + intercept);
                r * r
            })
            .sum();
        let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
        Ok(RateFit {
            slope,
            intercept,
            r_squared,
            points: points.to_vec(),
            excluded: points.len() - usable.len(),
        })
    }

    /// `e^{intercept} τ^{slope}`.
    pub fn predict(&self, tau: f64) -> f64 {
        libm::exp(self.intercept + self.slope * libm::log(tau))
    }
}

/// `τ_k = start / ratio^k`, `k = 0..steps`.
pub fn tau_grid(start: f64, steps: usize, ratio: f64) -> Vec<f64> {
    (0..steps)
        .map(|k| start / libm::pow(ratio, k as f64))
        .collect()
}
