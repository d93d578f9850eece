//! Time steppers: classical RK4 on the full right-hand side, and an
//! integrating-factor RK4 that advances the per-mode linear part by its
//! exact exponential so the step size is limited only by the (slow)
//! nonlinear dynamics, not by the dispersive stiffness of fine grids.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::solver::grid::FrontState;
use crate::solver::quad::QuadratureScheme;
use crate::solver::rhs::{nonlinear_hat, rhs_with_mode, RhsMode};
use crate::symbols::{Mat2, MultiplierTable};


/// exp(s A) for a 2x2 complex matrix, in closed form: with
/// mu = tr(sA)/2 and B = sA - mu I (so tr B = 0, B^2 = q^2 I with
/// q^2 = B11^2 + B12 B21), exp(sA) = e^mu [cosh(q) I + sinh(q)/q B].
pub fn expm2(a: &Mat2, s: f64) -> Mat2 {
    let m = [
        [a[0][0] * s, a[0][1] * s],
        [a[1][0] * s, a[1][1] * s],
    ];
    let mu = 0.5 * (m[0][0] + m[1][1]);
    let b11 = m[0][0] - mu;
    let q2 = b11 * b11 + m[0][1] * m[1][0];
    let q = q2.sqrt();
    let (ch, shq) = if q.norm() < 1e-4 {
        // cosh q and sinh(q)/q via their q^2 series; q may be a branch
        // point of sqrt but both functions are even in q.
        let one = Complex64::new(1.0, 0.0);
        (
            one + q2 * (0.5 + q2 * (1.0 / 24.0)),
            one + q2 * (1.0 / 6.0 + q2 * (1.0 / 120.0)),
        )
    } else {
        (q.cosh(), q.sinh() / q)
    };
    let e = mu.exp();
    [
        [e * (ch + shq * b11), e * shq * m[0][1]],
        [e * shq * m[1][0], e * (ch - shq * b11)],
    ]
}

#[inline]
fn mat_vec(a: &Mat2, v: [Complex64; 2]) -> [Complex64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

/// Step-size bound c_cfl / max_k ||A(xi_k)|| for the explicit stepper.
/// c_cfl = 1 sits well inside RK4's imaginary-axis stability reach of
/// 2 sqrt(2) per unit spectral radius (the row-sum norm bounds it).
pub fn cfl_max_dt(table: &MultiplierTable, c_cfl: f64) -> f64 {
    let norm = table.max_row_sum_norm();
    if norm > 0.0 {
        c_cfl / norm
    } else {
        f64::INFINITY
    }
}

fn stage_state(base: &FrontState, kp: &[f64], kq: &[f64], w: f64, t: f64) -> Result<FrontState> {
    let phi: Vec<f64> = base.phi.iter().zip(kp).map(|(x, k)| x + w * k).collect();
    let psi: Vec<f64> = base.psi.iter().zip(kq).map(|(x, k)| x + w * k).collect();
    let mut s = FrontState::new(base.grid.clone(), phi, psi)?;
    s.time = t;
    Ok(s)
}

pub(crate) fn step_rk4_mode(
    params: &PhysicalParams,
    state: &FrontState,
    table: &MultiplierTable,
    scheme: &QuadratureScheme,
    dt: f64,
    mode: RhsMode,
) -> Result<FrontState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::domain(format!("step size must be positive, got {dt}")));
    }
    let dt_max = cfl_max_dt(table, 1.0);
    if dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, dt_max });
    }
    let t = state.time;
    let (k1p, k1q) = rhs_with_mode(params, state, table, scheme, mode)?;
    let s2 = stage_state(state, &k1p, &k1q, 0.5 * dt, t + 0.5 * dt)?;
    let (k2p, k2q) = rhs_with_mode(params, &s2, table, scheme, mode)?;
    let s3 = stage_state(state, &k2p, &k2q, 0.5 * dt, t + 0.5 * dt)?;
    let (k3p, k3q) = rhs_with_mode(params, &s3, table, scheme, mode)?;
    let s4 = stage_state(state, &k3p, &k3q, dt, t + dt)?;
    let (k4p, k4q) = rhs_with_mode(params, &s4, table, scheme, mode)?;
    let sixth = dt / 6.0;
    let phi: Vec<f64> = (0..state.phi.len())
        .map(|i| state.phi[i] + sixth * (k1p[i] + 2.0 * (k2p[i] + k3p[i]) + k4p[i]))
        .collect();
    let psi: Vec<f64> = (0..state.psi.len())
        .map(|i| state.psi[i] + sixth * (k1q[i] + 2.0 * (k2q[i] + k3q[i]) + k4q[i]))
        .collect();
    let mut next = FrontState::new(state.grid.clone(), phi, psi)?;
    next.time = t + dt;
    Ok(next)
}

/// One classical RK4 step of the full system. Errors if `dt` exceeds the
/// linear stability limit or the fronts touch during a stage.
pub fn step_rk4(
    params: &PhysicalParams,
    state: &FrontState,
    table: &MultiplierTable,
    scheme: &QuadratureScheme,
    dt: f64,
) -> Result<FrontState> {
    step_rk4_mode(params, state, table, scheme, dt, RhsMode::Full)
}

/// Precomputed per-mode exponentials exp(dt A) and exp(dt/2 A) for the
/// integrating-factor stepper; build once, reuse every step.
#[derive(Debug, Clone)]
pub struct IntegratingFactor {
    dt: f64,
    e_full: Vec<Mat2>,
    e_half: Vec<Mat2>,
}

impl IntegratingFactor {
    pub fn new(table: &MultiplierTable, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::domain(format!("step size must be positive, got {dt}")));
        }
        Ok(Self {
            dt,
            e_full: table.a_matrix.iter().map(|a| expm2(a, dt)).collect(),
            e_half: table.a_matrix.iter().map(|a| expm2(a, 0.5 * dt)).collect(),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}

pub(crate) fn step_if_rk4_mode(
    params: &PhysicalParams,
    state: &FrontState,
    factors: &IntegratingFactor,
    scheme: &QuadratureScheme,
    mode: RhsMode,
) -> Result<FrontState> {
    let grid = &*state.grid;
    let n = grid.n_points();
    if factors.e_full.len() != n {
        return Err(Error::domain(
            "integrating factors were built for a different grid",
        ));
    }
    let dt = factors.dt;
    let t = state.time;
    let zp = grid.forward(&state.phi);
    let zq = grid.forward(&state.psi);

    let nl_of = |hp: &[Complex64], hq: &[Complex64], ts: f64| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        if mode == RhsMode::LinearOnly {
            let zero = vec![Complex64::new(0.0, 0.0); n];
            return Ok((zero.clone(), zero));
        }
        let mut s = FrontState::new(grid_clone(state), grid.inverse(hp), grid.inverse(hq))?;
        s.time = ts;
        nonlinear_hat(params, &s, scheme)
    };

    let apply = |e: &[Mat2], vp: &[Complex64], vq: &[Complex64]| -> (Vec<Complex64>, Vec<Complex64>) {
        let mut op = Vec::with_capacity(n);
        let mut oq = Vec::with_capacity(n);
        for k in 0..n {
            let [a, b] = mat_vec(&e[k], [vp[k], vq[k]]);
            op.push(a);
            oq.push(b);
        }
        (op, oq)
    };
    let lin = |vp: &[Complex64], vq: &[Complex64], kp: &[Complex64], kq: &[Complex64], w: f64| {
        let p: Vec<Complex64> = vp.iter().zip(kp).map(|(v, k)| v + w * k).collect();
        let q: Vec<Complex64> = vq.iter().zip(kq).map(|(v, k)| v + w * k).collect();
        (p, q)
    };

    // Exact linear propagation between stage times; RK4 weights on the
    // nonlinear increments.
    let (k1p, k1q) = nl_of(&zp, &zq, t)?;
    let (w2p, w2q) = lin(&zp, &zq, &k1p, &k1q, 0.5 * dt);
    let (w2p, w2q) = apply(&factors.e_half, &w2p, &w2q);
    let (k2p, k2q) = nl_of(&w2p, &w2q, t + 0.5 * dt)?;

    let (ezp, ezq) = apply(&factors.e_half, &zp, &zq);
    let (w3p, w3q) = lin(&ezp, &ezq, &k2p, &k2q, 0.5 * dt);
    let (k3p, k3q) = nl_of(&w3p, &w3q, t + 0.5 * dt)?;

    let (ek3p, ek3q) = apply(&factors.e_half, &k3p, &k3q);
    let (efzp, efzq) = apply(&factors.e_full, &zp, &zq);
    let (w4p, w4q) = lin(&efzp, &efzq, &ek3p, &ek3q, dt);
    let (k4p, k4q) = nl_of(&w4p, &w4q, t + dt)?;

    let (ek1p, ek1q) = apply(&factors.e_full, &k1p, &k1q);
    let k23p: Vec<Complex64> = k2p.iter().zip(&k3p).map(|(a, b)| a + b).collect();
    let k23q: Vec<Complex64> = k2q.iter().zip(&k3q).map(|(a, b)| a + b).collect();
    let (ek23p, ek23q) = apply(&factors.e_half, &k23p, &k23q);
    let sixth = dt / 6.0;
    let mut outp = Vec::with_capacity(n);
    let mut outq = Vec::with_capacity(n);
    for k in 0..n {
        outp.push(efzp[k] + sixth * (ek1p[k] + 2.0 * ek23p[k] + k4p[k]));
        outq.push(efzq[k] + sixth * (ek1q[k] + 2.0 * ek23q[k] + k4q[k]));
    }
    let mut next = FrontState::new(grid_clone(state), grid.inverse(&outp), grid.inverse(&outq))?;
    next.time = t + dt;
    Ok(next)
}

fn grid_clone(state: &FrontState) -> std::sync::Arc<crate::solver::grid::SpectralGrid> {
    state.grid.clone()
}

/// One integrating-factor RK4 step: linear part advanced by its exact
/// per-mode exponential, nonlinear part by RK4 weights. Not subject to
/// the linear stability limit.
pub fn step_if_rk4(
    params: &PhysicalParams,
    state: &FrontState,
    factors: &IntegratingFactor,
    scheme: &QuadratureScheme,
) -> Result<FrontState> {
    step_if_rk4_mode(params, state, factors, scheme, RhsMode::Full)
}
