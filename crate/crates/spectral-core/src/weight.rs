use crate::{Result, SpectralError};
use serde::{Deserialize, Serialize};

/// Parameters of the norm `‖A^{s/2} e^{α A^{θ/2}} u‖_{L²}`.
///
/// `θ = 1` is the analytic class; `0 < θ < 1` subanalytic; `α = 0` recovers
/// the homogeneous Sobolev norm `‖u‖_s` for any `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyWeight {
    pub s: f64,
    pub alpha: f64,
    pub theta: f64,
}

impl GevreyWeight {
    pub fn new(s: f64, alpha: f64, theta: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(SpectralError::InvalidWeight(format!("s = {s}")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(SpectralError::InvalidWeight(format!(
                "alpha = {alpha}, must be finite and ≥ 0"
            )));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(SpectralError::InvalidWeight(format!(
                "theta = {theta}, must lie in (0, 1]"
            )));
        }
        Ok(GevreyWeight { s, alpha, theta })
    }

    /// Analytic-class weight (θ = 1).
    pub fn analytic(s: f64, alpha: f64) -> Result<Self> {
        GevreyWeight::new(s, alpha, 1.0)
    }

    /// Sobolev weight (α = 0).
    pub fn sobolev(s: f64) -> Self {
        GevreyWeight {
            s,
            alpha: 0.0,
            theta: 1.0,
        }
    }

    /// Log of the squared-norm weight at shell radius `x`:
    /// `2s ln x + 2α x^θ`.
    #[inline]
    pub fn log_weight_sq(&self, x: f64) -> f64 {
        2.0 * self.s * x.ln() + 2.0 * self.alpha * x.powf(self.theta)
    }
}

/// Time-varying analytic weight with radius schedule `α(t) = β₀ + βt`
/// (θ fixed to 1). The schedule is nondecreasing since `β ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeVaryingWeight {
    pub s: f64,
    pub beta0: f64,
    pub beta: f64,
}

impl TimeVaryingWeight {
    /// `β` is restricted to `[0, 1/2]`, the range the persistence results
    /// assume.
    pub fn new(s: f64, beta0: f64, beta: f64) -> Result<Self> {
        if !(beta0 >= 0.0) || !beta0.is_finite() {
            return Err(SpectralError::InvalidWeight(format!("beta0 = {beta0}")));
        }
        if !(0.0..=0.5).contains(&beta) {
            return Err(SpectralError::InvalidWeight(format!(
                "beta = {beta}, must lie in [0, 1/2]"
            )));
        }
        Ok(TimeVaryingWeight { s, beta0, beta })
    }

    pub fn alpha_at(&self, t: f64) -> f64 {
        self.beta0 + self.beta * t
    }

    pub fn at(&self, t: f64) -> GevreyWeight {
        GevreyWeight {
            s: self.s,
            alpha: self.alpha_at(t),
            theta: 1.0,
        }
    }
}
