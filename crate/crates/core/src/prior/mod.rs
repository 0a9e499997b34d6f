//! Beta prior over the unit interval: maximum-likelihood fit with fixed
//! support and sampling.

pub mod special;

use rand::Rng;
use rand_distr::{Beta as BetaDist, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::{FeatureVector, FEATURE_FLOOR};
use special::{digamma, ln_beta, trigamma};

/// Lower edge of the shape-parameter search box.
pub const SHAPE_MIN: f64 = 1e-2;
/// Upper edge of the shape-parameter search box.
pub const SHAPE_MAX: f64 = 1e3;

const MAX_NEWTON_ITERATIONS: usize = 200;
const STEP_TOLERANCE: f64 = 1e-8;
const MIN_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PriorError {
    #[error("observation {value} lies outside the open unit interval")]
    DomainError { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub alpha: f64,
    pub beta: f64,
    /// Set when the fit failed or the data were degenerate and the uniform
    /// prior Beta(1, 1) was substituted.
    pub fallback_used: bool,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        BetaParams {
            alpha,
            beta,
            fallback_used: false,
        }
    }

    pub fn uniform_fallback() -> Self {
        BetaParams {
            alpha: 1.0,
            beta: 1.0,
            fallback_used: true,
        }
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let s = self.alpha + self.beta;
        self.alpha * self.beta / (s * s * (s + 1.0))
    }
}

/// Beta log-likelihood of `data` with support fixed to `[0, 1]`.
pub fn log_likelihood(data: &[f64], p: &BetaParams) -> Result<f64, PriorError> {
    let mut acc = 0.0;
    for &x in data {
        if !(x > 0.0 && x < 1.0) {
            return Err(PriorError::DomainError { value: x });
        }
        acc += (p.alpha - 1.0) * x.ln() + (p.beta - 1.0) * (1.0 - x).ln();
    }
    Ok(acc - data.len() as f64 * ln_beta(p.alpha, p.beta))
}

/// Sufficient statistics, accumulated over sorted data so that the fit does
/// not depend on input order.
struct SuffStats {
    mean: f64,
    variance: f64,
    mean_ln_x: f64,
    mean_ln_1mx: f64,
}

impl SuffStats {
    fn new(data: &[f64]) -> Self {
        let mut sorted = data.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let variance = sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let mean_ln_x = sorted.iter().map(|x| x.ln()).sum::<f64>() / n;
        let mean_ln_1mx = sorted.iter().map(|x| (1.0 - x).ln()).sum::<f64>() / n;
        SuffStats {
            mean,
            variance,
            mean_ln_x,
            mean_ln_1mx,
        }
    }

    /// Average log-likelihood per observation.
    fn objective(&self, a: f64, b: f64) -> f64 {
        (a - 1.0) * self.mean_ln_x + (b - 1.0) * self.mean_ln_1mx - ln_beta(a, b)
    }

    /// Negative gradient of [`Self::objective`].
    fn residual(&self, a: f64, b: f64) -> [f64; 2] {
        let ds = digamma(a + b);
        [
            digamma(a) - ds - self.mean_ln_x,
            digamma(b) - ds - self.mean_ln_1mx,
        ]
    }
}

/// Maximum-likelihood Beta fit over the box `[SHAPE_MIN, SHAPE_MAX]^2`.
///
/// Starts from the method-of-moments estimate and runs a projected Newton
/// iteration on the digamma stationarity conditions with backtracking.
/// Degenerate input (fewer than two points, near-zero variance) and any
/// numerical failure return [`BetaParams::uniform_fallback`].
pub fn fit_beta_mle(data: &FeatureVector) -> BetaParams {
    let values = data.values();
    if values.len() < 2 || values.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return BetaParams::uniform_fallback();
    }
    let stats = SuffStats::new(values);
    if stats.variance.is_nan() || stats.variance < MIN_VARIANCE {
        return BetaParams::uniform_fallback();
    }
    match newton(&stats) {
        Some((a, b)) => BetaParams::new(a, b),
        None => BetaParams::uniform_fallback(),
    }
}

fn newton(stats: &SuffStats) -> Option<(f64, f64)> {
    let clamp = |v: f64| v.clamp(SHAPE_MIN, SHAPE_MAX);
    let common = stats.mean * (1.0 - stats.mean) / stats.variance - 1.0;
    let common = if common > 0.0 { common } else { 1.0 };
    let mut x = [clamp(stats.mean * common), clamp((1.0 - stats.mean) * common)];
    if !x.iter().all(|v| v.is_finite()) {
        return None;
    }
    let mut f = stats.objective(x[0], x[1]);

    for _ in 0..MAX_NEWTON_ITERATIONS {
        let g = stats.residual(x[0], x[1]);
        let ts = trigamma(x[0] + x[1]);
        let jac = [
            [trigamma(x[0]) - ts, -ts],
            [-ts, trigamma(x[1]) - ts],
        ];
        if !(g.iter().chain(jac.iter().flatten()).all(|v| v.is_finite()) && f.is_finite()) {
            return None;
        }

        // Coordinates pinned at a bound whose ascent direction points outward.
        let pinned = [0, 1].map(|i| {
            (x[i] <= SHAPE_MIN && g[i] > 0.0) || (x[i] >= SHAPE_MAX && g[i] < 0.0)
        });
        let step = match pinned {
            [false, false] => {
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                if det.is_nan() || det <= 0.0 {
                    return None;
                }
                [
                    -(jac[1][1] * g[0] - jac[0][1] * g[1]) / det,
                    -(jac[0][0] * g[1] - jac[1][0] * g[0]) / det,
                ]
            }
            [true, false] => [0.0, -g[1] / jac[1][1]],
            [false, true] => [-g[0] / jac[0][0], 0.0],
            [true, true] => return Some((x[0], x[1])),
        };

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = [clamp(x[0] + t * step[0]), clamp(x[1] + t * step[1])];
            let fc = stats.objective(cand[0], cand[1]);
            if fc.is_finite() && fc >= f - 1e-15 * f.abs() {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        let (cand, fc) = accepted.unwrap_or((x, f));
        let change = (cand[0] - x[0]).abs().max((cand[1] - x[1]).abs());
        x = cand;
        f = fc;
        if change < STEP_TOLERANCE {
            return Some((x[0], x[1]));
        }
    }
    None
}

/// Draws `count` latent values from Beta(alpha, beta), clamped into
/// `[FEATURE_FLOOR, 1 - FEATURE_FLOOR]`.
pub fn sample_beta<R: Rng + ?Sized>(p: &BetaParams, count: usize, rng: &mut R) -> Vec<f64> {
    let dist = BetaDist::new(p.alpha, p.beta).expect("shape parameters are positive");
    (0..count)
        .map(|_| dist.sample(rng).clamp(FEATURE_FLOOR, 1.0 - FEATURE_FLOOR))
        .collect()
}
