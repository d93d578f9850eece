//! Green's-function kernels of the contour-dynamics integrals and the
//! Galilean drift constants produced by regularizing the divergent
//! single-front velocity.
//!
//! The interaction kernel is the Green's function of (-Laplace)^{alpha/2}
//! up to the constant `g_alpha_const` (absorbed into the scalar jumps):
//! G(x) = |x|^{alpha-2} for alpha < 2 and G(x) = -log|x| / (2 pi) at
//! alpha = 2. `kernel_h` evaluates the once-integrated kernels of the
//! conservative form: for separation x != 0 and height difference y,
//!
//!   same-front      H1(x, y) = -G(x) y            + int_0^y G(sqrt(x^2+s^2)) ds,
//!   opposite-front  H2(x, y) = -G(sqrt(x^2+4h^2)) y + int_0^y G(sqrt(x^2+s^2)) ds,
//!
//! so dH/dy is exactly the kernel difference appearing in the
//! non-conservative evolution equations and H2 - H1 is linear in y.

use crate::adaptive::adaptive_simpson;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::special_fn::beta_fn;

const PI: f64 = std::f64::consts::PI;

/// Interaction kernel G(x) for x != 0.
pub fn green_g(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    if x == 0.0 || !x.is_finite() {
        return Err(Error::domain(format!("green_g needs x != 0, got {x}")));
    }
    let ax = x.abs();
    if alpha == 2.0 {
        Ok(-ax.ln() / (2.0 * PI))
    } else {
        Ok(ax.powf(alpha - 2.0))
    }
}

/// Normalization constant of the velocity law, carried by the scalar
/// jumps: 1 at alpha = 2, Gamma(1 - alpha/2) / (2^alpha pi Gamma(alpha/2))
/// for alpha < 2.
pub fn g_alpha_const(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    if alpha == 2.0 {
        return Ok(1.0);
    }
    let num = crate::special_fn::gamma_fn(1.0 - alpha / 2.0)?;
    let den = 2f64.powf(alpha) * PI * crate::special_fn::gamma_fn(alpha / 2.0)?;
    Ok(num / den)
}

/// Which once-integrated kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// H1: self-interaction of one front.
    SameFront,
    /// H2: interaction across the 2h gap.
    OppositeFront,
}

/// Once-integrated kernel H1 or H2 at separation `x` != 0, height
/// difference `y`; `h` is the front half-separation (used by H2 only).
/// The s-integral is evaluated by adaptive Simpson to 1e-10 absolute.
pub fn kernel_h(alpha: f64, h: f64, kind: KernelKind, x: f64, y: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("h must be positive, got {h}")));
    }
    if x == 0.0 {
        return Err(Error::domain(
            "kernel_h needs x != 0 (kernel is singular on the diagonal)",
        ));
    }
    let linear = match kind {
        KernelKind::SameFront => -green_g(alpha, x)? * y,
        KernelKind::OppositeFront => {
            -green_g(alpha, (x * x + 4.0 * h * h).sqrt())? * y
        }
    };
    let integral = adaptive_simpson(
        &|s: f64| match alpha {
            2.0 => -0.5 * (x * x + s * s).ln() / (2.0 * PI),
            _ => (x * x + s * s).powf(0.5 * alpha - 1.0),
        },
        0.0,
        y,
        1e-10,
    )?;
    Ok(linear + integral)
}

/// Drift constants of the regularized frame.
///
/// `v4` and `v5` are the finite parts of the two divergent single-front
/// contributions, and `v = (theta_plus - theta_minus)/2 * (v5 - v4)` is
/// the uniform advection left in the two-front equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileanConstants {
    pub v4: f64,
    pub v5: f64,
    pub v: f64,
}

/// Computes the drift constants for the given regime.
pub fn galilean_constants(params: &PhysicalParams) -> Result<GalileanConstants> {
    let alpha = params.alpha;
    let h = params.h;
    let (v4, v5, diff) = if alpha == 2.0 {
        (0.0, -h, -h)
    } else if alpha == 1.0 {
        let common = -2.0 * (1.0 + (1.0 + 4.0 * h * h).sqrt()).ln();
        let v4 = 2.0 * (2.0 * h).ln() + common;
        let v5 = 2.0 * 2f64.ln() + common;
        (v4, v5, -2.0 * h.ln())
    } else {
        let b = beta_fn(0.5, 0.5 * (1.0 - alpha))? * (2.0 * h).powf(alpha - 1.0);
        if alpha < 1.0 {
            (-b, 0.0, b)
        } else {
            (0.0, b, b)
        }
    };
    Ok(GalileanConstants {
        v4,
        v5,
        v: 0.5 * (params.theta_plus - params.theta_minus) * diff,
    })
}
