//! Fourier-multiplier symbols of the linearized two-front operators and
//! the per-mode 2x2 coefficient matrices A(xi) used by both the stability
//! scans and the pseudo-spectral solver.
//!
//! Linearizing about the flat fronts phi = psi = 0 gives
//!
//!   d/dt (phi_hat, psi_hat) = A(xi) (phi_hat, psi_hat),
//!   A(xi) = [[-i xi (v + Theta+ b1),  -i xi Theta- b2],
//!            [-i xi Theta+ b2,        -i xi (-v + Theta- b1)]],
//!
//! with b1, b2 the self- and cross-front symbols and v the Galilean drift
//! from [`crate::kernels::galilean_constants`]. At alpha = 2 the b1 symbol
//! is distributional, so the matrix is assembled from the explicit Euler
//! operators (Hilbert transform with symbol -i sgn xi); the result equals
//! the generic formula with the effective pointwise value b1 = 1/(2|xi|).
//! At alpha = 1 the evolution equations are written in a frame shifted by
//! the extra Galilean velocity gamma (Theta+ + Theta-), which moves the
//! divergent constant out of b1; [`SymbolFrame`] selects between that
//! solver frame and the stability frame, which differ by a multiple of
//! i xi times the identity (imaginary parts of growth rates only).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::galilean_constants;
use crate::params::PhysicalParams;
use crate::special_fn::{bessel_k, beta_fn, gamma_fn, EULER_MASCHERONI};

const PI: f64 = std::f64::consts::PI;

/// 2x2 complex matrix, row major.
pub type Mat2 = [[Complex64; 2]; 2];

/// Self-interaction symbol b1(xi) for alpha in (0, 2):
/// 2 sin(pi alpha / 2) Gamma(alpha - 1) |xi|^{1 - alpha} for alpha != 1,
/// -2 gamma - 2 log|xi| at alpha = 1. The alpha = 2 symbol is
/// distributional and is not evaluated pointwise; see [`symbol_b1_effective`].
pub fn symbol_b1(alpha: f64, xi: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!(
            "b1 is pointwise only for alpha in (0, 2), got {alpha}"
        )));
    }
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::domain(format!("b1 needs xi != 0, got {xi}")));
    }
    if alpha == 1.0 {
        Ok(-2.0 * EULER_MASCHERONI - 2.0 * xi.abs().ln())
    } else {
        Ok(2.0 * (PI * alpha / 2.0).sin()
            * gamma_fn(alpha - 1.0)?
            * xi.abs().powf(1.0 - alpha))
    }
}

/// b1 extended to alpha = 2 by the value 1/(2|xi|) that makes the generic
/// matrix formula reproduce the explicit Euler linear operators.
pub fn symbol_b1_effective(alpha: f64, xi: f64) -> Result<f64> {
    if alpha == 2.0 {
        if xi == 0.0 || !xi.is_finite() {
            return Err(Error::domain(format!("b1 needs xi != 0, got {xi}")));
        }
        Ok(0.5 / xi.abs())
    } else {
        symbol_b1(alpha, xi)
    }
}

/// Cross-front symbol b2(xi) > 0:
/// (2 sqrt(pi) / (Gamma(1 - alpha/2) (4h)^{(1-alpha)/2}))
///   |xi|^{(1-alpha)/2} K_{(1-alpha)/2}(2h|xi|) for alpha < 2,
/// e^{-2h|xi|} / (2|xi|) at alpha = 2.
pub fn symbol_b2(params: &PhysicalParams, xi: f64) -> Result<f64> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::domain(format!("b2 needs xi != 0, got {xi}")));
    }
    let (alpha, h) = (params.alpha, params.h);
    let ax = xi.abs();
    if alpha == 2.0 {
        return Ok((-2.0 * h * ax).exp() / (2.0 * ax));
    }
    let nu = 0.5 * (1.0 - alpha);
    let pref = 2.0 * PI.sqrt()
        / (gamma_fn(1.0 - 0.5 * alpha)? * (4.0 * h).powf(nu));
    Ok(pref * ax.powf(nu) * bessel_k(nu, 2.0 * h * ax)?)
}

/// Galilean frame the matrix coefficients are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolFrame {
    /// Frame of the linearized analysis: uniform drift v kept on the
    /// diagonal, b1 finite part used as is.
    Stability,
    /// Frame the time-stepper integrates in. Identical to `Stability`
    /// except at alpha = 1, where the equations carry the extra shift
    /// gamma (Theta+ + Theta-) absorbing the divergent b1 constant.
    Solver,
}

/// Velocity c of the solver frame relative to the stability frame:
/// A_solver(xi) = A_stability(xi) - i xi c I. Nonzero only at alpha = 1,
/// where c = gamma (Theta+ + Theta-).
pub fn frame_shift_velocity(params: &PhysicalParams) -> f64 {
    if params.is_sqg() {
        EULER_MASCHERONI * (params.theta_plus + params.theta_minus)
    } else {
        0.0
    }
}

/// How the xi = 0 row of a multiplier table acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroModePolicy {
    /// A(0) = 0: the means of phi and psi are invariants of the evolution,
    /// and b1, b2 are singular at xi = 0.
    ZeroedMean,
}

/// Per-mode linear coefficient matrices for a fixed wavenumber set.
///
/// Invariants: A(0) = 0; A(-xi) = conj(A(xi)) entrywise; every entry is
/// purely imaginary for real xi. Tables are immutable once built and can
/// be shared freely across threads.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    pub params: PhysicalParams,
    pub frame: SymbolFrame,
    pub zero_mode_policy: ZeroModePolicy,
    pub xi: Vec<f64>,
    pub a_matrix: Vec<Mat2>,
}

/// Builds the coefficient matrices for the given wavenumbers. Entries at
/// xi = 0 are zeroed ([`ZeroModePolicy::ZeroedMean`]); callers discretizing
/// an even grid should also pass 0 in the Nyquist slot, whose unpaired mode
/// cannot satisfy the reality symmetry.
pub fn build_multiplier_table(
    params: &PhysicalParams,
    wavenumbers: &[f64],
    frame: SymbolFrame,
) -> Result<MultiplierTable> {
    let mut a_matrix = Vec::with_capacity(wavenumbers.len());
    for &xi in wavenumbers {
        a_matrix.push(mode_matrix(params, xi, frame)?);
    }
    Ok(MultiplierTable {
        params: *params,
        frame,
        zero_mode_policy: ZeroModePolicy::ZeroedMean,
        xi: wavenumbers.to_vec(),
        a_matrix,
    })
}

/// Coefficient matrix of a single mode (zero matrix at xi = 0).
pub fn mode_matrix(params: &PhysicalParams, xi: f64, frame: SymbolFrame) -> Result<Mat2> {
    let zero = Complex64::new(0.0, 0.0);
    if xi == 0.0 {
        return Ok([[zero; 2], [zero; 2]]);
    }
    let b1 = symbol_b1_effective(params.alpha, xi)?;
    let b2 = symbol_b2(params, xi)?;
    let v = galilean_constants(params)?.v;
    let m_ixi = Complex64::new(0.0, -xi);
    let shift = m_ixi * frame_shift_velocity(params);
    let mut a = [
        [
            m_ixi * (v + params.theta_plus * b1),
            m_ixi * (params.theta_minus * b2),
        ],
        [
            m_ixi * (params.theta_plus * b2),
            m_ixi * (-v + params.theta_minus * b1),
        ],
    ];
    if frame == SymbolFrame::Solver {
        a[0][0] += shift;
        a[1][1] += shift;
    }
    Ok(a)
}

impl MultiplierTable {
    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// A(xi_k) v for the mode k.
    pub fn apply_mode(&self, k: usize, v: [Complex64; 2]) -> [Complex64; 2] {
        let a = &self.a_matrix[k];
        [
            a[0][0] * v[0] + a[0][1] * v[1],
            a[1][0] * v[0] + a[1][1] * v[1],
        ]
    }

    /// max_k max-row-sum norm of A(xi_k); a stiffness bound for step-size
    /// control.
    pub fn max_row_sum_norm(&self) -> f64 {
        self.a_matrix
            .iter()
            .map(|a| {
                let r0 = a[0][0].norm() + a[0][1].norm();
                let r1 = a[1][0].norm() + a[1][1].norm();
                r0.max(r1)
            })
            .fold(0.0, f64::max)
    }
}

/// Shear velocity U(y) of the flat two-front state (fronts at y = +-h):
/// power law for alpha in (0,1) or (1,2), logarithms at alpha = 1,
/// piecewise linear at alpha = 2. For alpha <= 1 the profile diverges on
/// the fronts, so y = +-h is a domain error there.
pub fn shear_profile(params: &PhysicalParams, y: f64) -> Result<f64> {
    let (alpha, h) = (params.alpha, params.h);
    let (dp, dm) = ((y - h).abs(), (y + h).abs());
    if alpha <= 1.0 && (dp == 0.0 || dm == 0.0) {
        return Err(Error::domain(format!(
            "shear profile is singular on the fronts y = +-h for alpha <= 1, got y = {y}"
        )));
    }
    let (tp, tm) = (params.theta_plus, params.theta_minus);
    if alpha == 2.0 {
        Ok(0.5 * tp * dp + 0.5 * tm * dm)
    } else if alpha == 1.0 {
        Ok(2.0 * tp * dp.ln() + 2.0 * tm * dm.ln())
    } else {
        let b = beta_fn(0.5, 0.5 * (1.0 - alpha))?;
        Ok(-b * (tp * dp.powf(alpha - 1.0) + tm * dm.powf(alpha - 1.0)))
    }
}
