//! Physical regime of a two-front problem.

use crate::error::{Error, Result};

/// Parameters selecting one member of the GSQG family and one two-front
/// configuration: the interaction exponent `alpha` in (0, 2], the scaled
/// scalar jumps `theta_plus` / `theta_minus` across the upper and lower
/// fronts, and the half-separation `h` > 0 (fronts at y = +h and y = -h).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub alpha: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub h: f64,
}

impl PhysicalParams {
    pub fn new(alpha: f64, theta_plus: f64, theta_minus: f64, h: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::domain(format!(
                "alpha must lie in (0, 2], got {alpha}"
            )));
        }
        if !(h > 0.0) {
            return Err(Error::domain(format!("h must be positive, got {h}")));
        }
        if !(theta_plus.is_finite() && theta_minus.is_finite()) {
            return Err(Error::domain("theta_plus/theta_minus must be finite"));
        }
        Ok(Self {
            alpha,
            theta_plus,
            theta_minus,
            h,
        })
    }

    /// True exactly at the Euler endpoint alpha = 2, where the Green's
    /// function is logarithmic and several symbols change form.
    pub fn is_euler(&self) -> bool {
        self.alpha == 2.0
    }

    /// True exactly at the SQG point alpha = 1, where the solver frame
    /// differs from the stability frame by a uniform velocity.
    pub fn is_sqg(&self) -> bool {
        self.alpha == 1.0
    }
}
