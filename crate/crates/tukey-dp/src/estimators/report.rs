use serde::Serialize;

use crate::dp::noise::NoiseMode;
use crate::error::{Error, Result};

/// Shared estimator parameters `(epsilon, delta, alpha, beta, kappa)` plus
/// the grid exponent and the noise mode.
#[derive(Clone, Copy, Debug)]
pub struct DpParams {
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: usize,
    pub upsilon: u32,
    pub mode: NoiseMode,
}

impl DpParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParam("epsilon must be positive".into()));
        }
        if self.delta < 0.0 {
            return Err(Error::InvalidParam("delta must be nonnegative".into()));
        }
        if !(0.0 < self.alpha && self.alpha < 0.5) {
            return Err(Error::InvalidParam("alpha must lie in (0, 1/2)".into()));
        }
        if !(0.0 < self.beta && self.beta < 0.5) {
            return Err(Error::InvalidParam("beta must lie in (0, 1/2)".into()));
        }
        if self.kappa == 0 {
            return Err(Error::InvalidParam("kappa must be at least 1".into()));
        }
        Ok(())
    }

    /// The depth-shift constants below are analysis-side guarantees; in
    /// disabled mode all noise and margins vanish and the shifts collapse
    /// to zero wherever an algorithm consumes them as an input.
    pub fn effective_shift(&self, shift: f64) -> f64 {
        if self.mode.is_disabled() {
            0.0
        } else {
            shift
        }
    }
}

/// Outcome of one SVT-style estimator run.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub value: f64,
    /// Closed-form depth-shift guarantee of the corresponding theorem.
    pub delta_depth: f64,
    /// Threshold margin actually applied (0 in disabled mode).
    pub margin: f64,
    pub halt: Option<usize>,
    /// Per-query noisy values; debug only, not privacy-safe.
    pub trace: Vec<f64>,
    pub epsilon: f64,
    pub delta: f64,
}

/// SVT margin `6 ln(arg/beta) / epsilon` and the matching depth shift
/// `12 ln(arg/beta) / epsilon` (twice the margin).
pub fn svt_margin(epsilon: f64, beta: f64, arg: f64) -> f64 {
    6.0 * (arg / beta).ln() / epsilon
}

pub fn svt_delta_depth(epsilon: f64, beta: f64, arg: f64) -> f64 {
    2.0 * svt_margin(epsilon, beta, arg)
}
