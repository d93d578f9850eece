//! Right-hand side of the two-front evolution.
//!
//! The time derivative splits into a per-mode linear action (drift,
//! self- and cross-front dispersive operators, encoded in a
//! [`MultiplierTable`]) and the fully nonlinear kernel-difference
//! integrals, which vanish to quadratic order and therefore never
//! double-count the linear part. Nonlinear products are 2/3-dealiased,
//! and the mean and Nyquist modes of the derivative are forced to zero:
//! the means are invariants of the flow and the unpaired Nyquist mode
//! cannot satisfy the reality symmetry.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::solver::grid::FrontState;
use crate::solver::quad::{
    nonlinear_cross, nonlinear_self, FrontField, QuadratureScheme, TargetEquation,
};
use crate::symbols::MultiplierTable;

/// Which part of the derivative to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsMode {
    Full,
    /// Per-mode linear action only; for validating steppers against the
    /// closed-form mode evolution.
    LinearOnly,
}

fn check_table(table: &MultiplierTable, params: &PhysicalParams, n: usize) -> Result<()> {
    if table.len() != n {
        return Err(Error::domain(format!(
            "multiplier table covers {} modes, grid has {n}",
            table.len()
        )));
    }
    let tp = &table.params;
    if tp.alpha != params.alpha
        || tp.theta_plus != params.theta_plus
        || tp.theta_minus != params.theta_minus
        || tp.h != params.h
    {
        return Err(Error::domain(
            "multiplier table was built for different parameters",
        ));
    }
    Ok(())
}

fn zero_mean_and_nyquist(hat: &mut [Complex64]) {
    let n = hat.len();
    hat[0] = Complex64::new(0.0, 0.0);
    if n % 2 == 0 {
        hat[n / 2] = Complex64::new(0.0, 0.0);
    }
}

/// Dealiased spectral coefficients of the nonlinear terms
/// (-Theta+ I_self[phi] - Theta- I_cross, and the psi mirror).
pub fn nonlinear_hat(
    params: &PhysicalParams,
    state: &FrontState,
    scheme: &QuadratureScheme,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let grid = &*state.grid;
    let self_phi = nonlinear_self(params, state, FrontField::Phi, scheme)?;
    let self_psi = nonlinear_self(params, state, FrontField::Psi, scheme)?;
    let cross_phi = nonlinear_cross(params, state, TargetEquation::PhiEquation, scheme)?;
    let cross_psi = nonlinear_cross(params, state, TargetEquation::PsiEquation, scheme)?;
    let (tp, tm) = (params.theta_plus, params.theta_minus);
    let nl_phi: Vec<f64> = self_phi
        .iter()
        .zip(&cross_phi)
        .map(|(s, c)| -tp * s - tm * c)
        .collect();
    let nl_psi: Vec<f64> = self_psi
        .iter()
        .zip(&cross_psi)
        .map(|(s, c)| -tm * s - tp * c)
        .collect();
    let mut hat_phi = grid.forward(&nl_phi);
    let mut hat_psi = grid.forward(&nl_psi);
    grid.dealias_hat(&mut hat_phi);
    grid.dealias_hat(&mut hat_psi);
    zero_mean_and_nyquist(&mut hat_phi);
    zero_mean_and_nyquist(&mut hat_psi);
    Ok((hat_phi, hat_psi))
}

/// Time derivative (d phi/dt, d psi/dt) as real sample arrays.
pub fn rhs_with_mode(
    params: &PhysicalParams,
    state: &FrontState,
    table: &MultiplierTable,
    scheme: &QuadratureScheme,
    mode: RhsMode,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = &*state.grid;
    let n = grid.n_points();
    check_table(table, params, n)?;
    let hat_phi = grid.forward(&state.phi);
    let hat_psi = grid.forward(&state.psi);
    let mut out_phi = Vec::with_capacity(n);
    let mut out_psi = Vec::with_capacity(n);
    for k in 0..n {
        let [dp, dq] = table.apply_mode(k, [hat_phi[k], hat_psi[k]]);
        out_phi.push(dp);
        out_psi.push(dq);
    }
    if mode == RhsMode::Full {
        let (nl_phi, nl_psi) = nonlinear_hat(params, state, scheme)?;
        for k in 0..n {
            out_phi[k] += nl_phi[k];
            out_psi[k] += nl_psi[k];
        }
    }
    zero_mean_and_nyquist(&mut out_phi);
    zero_mean_and_nyquist(&mut out_psi);
    Ok((grid.inverse(&out_phi), grid.inverse(&out_psi)))
}

/// Full time derivative (d phi/dt, d psi/dt).
pub fn rhs(
    params: &PhysicalParams,
    state: &FrontState,
    table: &MultiplierTable,
    scheme: &QuadratureScheme,
) -> Result<(Vec<f64>, Vec<f64>)> {
    rhs_with_mode(params, state, table, scheme, RhsMode::Full)
}
