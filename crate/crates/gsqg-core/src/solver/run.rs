//! Simulation drivers: full two-front runs, the symmetric and
//! antisymmetric scalar reductions, and eigenvector initial data for
//! growth-rate experiments.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::solver::grid::{FrontState, SpectralGrid};
use crate::solver::quad::{
    nonlinear_cross, nonlinear_self, FrontField, QuadratureOptions, QuadratureScheme,
    TargetEquation,
};
use crate::solver::rhs::RhsMode;
use crate::solver::stepper::{cfl_max_dt, step_if_rk4_mode, step_rk4_mode, IntegratingFactor};
use crate::stability::growth_rates;
use crate::symbols::{
    build_multiplier_table, frame_shift_velocity, mode_matrix, MultiplierTable, SymbolFrame,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepperKind {
    /// Classical RK4 on the full right-hand side; step size capped by
    /// the linear stability bound.
    Rk4,
    /// Exact per-mode linear propagation, RK4 on the nonlinear part;
    /// step size limited only by accuracy.
    IntegratingFactorRk4,
}

/// Time-stepping controls for a run.
#[derive(Debug, Clone)]
pub struct TimeSettings {
    /// Fixed step; `None` derives it from the stability bound and lands
    /// exactly on `t_end` in either case.
    pub dt: Option<f64>,
    /// Absolute end time (initial state time is the start).
    pub t_end: f64,
    /// Safety factor in dt_max = c_cfl / max-mode-norm.
    pub c_cfl: f64,
    pub stepper: StepperKind,
    /// Steps between stored snapshots; 0 stores only first and last.
    pub snapshot_every: usize,
    /// Warn when max(|phi|, |psi|) / h exceeds this at alpha <= 1,
    /// where well-posedness is a small-data statement.
    pub amplitude_warn_ratio: f64,
}

impl Default for TimeSettings {
    fn default() -> Self {
        Self {
            dt: None,
            t_end: 1.0,
            c_cfl: 1.0,
            stepper: StepperKind::Rk4,
            snapshot_every: 10,
            amplitude_warn_ratio: 0.1,
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// The fronts touched; `time` is the step at which the margin
    /// 2h - psi + phi first failed to stay positive.
    ChordArcViolation { time: f64, margin: f64 },
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub snapshots: Vec<FrontState>,
    pub termination: Termination,
    /// Step size actually used.
    pub dt: f64,
    pub steps_taken: usize,
    pub warnings: Vec<String>,
}

fn resolve_dt(
    settings: &TimeSettings,
    table: &MultiplierTable,
    span: f64,
) -> Result<(f64, usize)> {
    if !(span > 0.0 && span.is_finite()) {
        return Err(Error::domain(format!(
            "t_end must exceed the initial time by a finite amount, got span {span}"
        )));
    }
    let raw = match settings.dt {
        Some(dt) if dt > 0.0 && dt.is_finite() => dt,
        Some(dt) => {
            return Err(Error::domain(format!(
                "step size must be positive, got {dt}"
            )))
        }
        None => {
            let bound = cfl_max_dt(table, settings.c_cfl);
            if !bound.is_finite() {
                span
            } else {
                bound
            }
        }
    };
    let n_steps = (span / raw).ceil().max(1.0) as usize;
    Ok((span / n_steps as f64, n_steps))
}

fn amplitude_warning(params: &PhysicalParams, state: &FrontState, ratio: f64) -> Option<String> {
    if params.alpha > 1.0 {
        return None;
    }
    let amp = state
        .phi
        .iter()
        .chain(&state.psi)
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    if amp > ratio * params.h {
        Some(format!(
            "amplitude {amp:.3e} exceeds {ratio} h = {:.3e} at alpha = {}; \
             the small-data regime is not guaranteed",
            ratio * params.h,
            params.alpha
        ))
    } else {
        None
    }
}

/// Runs the two-front system from `initial` to `settings.t_end`.
/// A chord-arc violation ends the run cleanly with the partial
/// trajectory; all other errors propagate.
pub fn run_simulation(
    params: &PhysicalParams,
    initial: FrontState,
    settings: &TimeSettings,
    quad_opts: &QuadratureOptions,
) -> Result<RunOutcome> {
    let grid = initial.grid.clone();
    let table = build_multiplier_table(params, grid.xi_multiplier(), SymbolFrame::Solver)?;
    let scheme = QuadratureScheme::new(params, &grid, quad_opts)?;
    let (dt, n_steps) = resolve_dt(settings, &table, settings.t_end - initial.time)?;
    let factors = match settings.stepper {
        StepperKind::IntegratingFactorRk4 => Some(IntegratingFactor::new(&table, dt)?),
        StepperKind::Rk4 => None,
    };
    let mut warnings = Vec::new();
    if let Some(w) = amplitude_warning(params, &initial, settings.amplitude_warn_ratio) {
        warnings.push(w);
    }

    let mut snapshots = vec![initial.clone()];
    let mut state = initial;
    let mut termination = Termination::Completed;
    let mut steps_taken = 0;
    for step in 1..=n_steps {
        let next = match settings.stepper {
            StepperKind::Rk4 => {
                step_rk4_mode(params, &state, &table, &scheme, dt, RhsMode::Full)
            }
            StepperKind::IntegratingFactorRk4 => {
                step_if_rk4_mode(params, &state, factors.as_ref().unwrap(), &scheme, RhsMode::Full)
            }
        };
        match next {
            Ok(s) => state = s,
            Err(Error::ChordArc { time, margin }) => {
                termination = Termination::ChordArcViolation { time, margin };
                break;
            }
            Err(e) => return Err(e),
        }
        steps_taken = step;
        if settings.snapshot_every != 0 && step % settings.snapshot_every == 0 && step != n_steps {
            snapshots.push(state.clone());
        }
        if step == n_steps {
            snapshots.push(state.clone());
        }
    }
    if termination != Termination::Completed && steps_taken > 0 {
        // Keep the last healthy state visible even off-cadence.
        if snapshots.last().map(|s| s.time) != Some(state.time) {
            snapshots.push(state.clone());
        }
    }
    Ok(RunOutcome {
        snapshots,
        termination,
        dt,
        steps_taken,
        warnings,
    })
}

/// Invariant manifolds that close on a single front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    /// Theta+ = Theta-, psi = -phi. Doubles as the half-plane front
    /// over a rigid boundary by reflection.
    Symmetric,
    /// Theta+ = -Theta-, psi(x) = -phi(-x).
    Antisymmetric,
}

impl ScalarKind {
    /// psi reconstructed from phi on the manifold.
    pub fn partner(self, phi: &[f64]) -> Vec<f64> {
        match self {
            ScalarKind::Symmetric => phi.iter().map(|v| -v).collect(),
            ScalarKind::Antisymmetric => {
                let n = phi.len();
                (0..n).map(|i| -phi[(n - i) % n]).collect()
            }
        }
    }

    fn check_params(self, params: &PhysicalParams) -> Result<()> {
        let ok = match self {
            ScalarKind::Symmetric => params.theta_plus == params.theta_minus,
            ScalarKind::Antisymmetric => params.theta_plus == -params.theta_minus,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{:?} reduction needs Theta+ = {}Theta-, got {} and {}",
                self,
                if self == ScalarKind::Symmetric { "" } else { "-" },
                params.theta_plus,
                params.theta_minus
            )))
        }
    }
}

/// Single-front snapshot of a scalar-reduction run.
#[derive(Debug, Clone)]
pub struct ScalarState {
    pub phi: Vec<f64>,
    pub time: f64,
}

#[derive(Debug, Clone)]
pub struct ScalarRunOutcome {
    pub snapshots: Vec<ScalarState>,
    pub termination: Termination,
    pub dt: f64,
    pub steps_taken: usize,
    pub warnings: Vec<String>,
}

/// phi-equation right-hand side on the reduction manifold: the partner
/// front is reconstructed, so this is exactly the phi component of the
/// two-front derivative (the scalar equation in its two-front clothes).
fn scalar_rhs(
    params: &PhysicalParams,
    grid: &Arc<SpectralGrid>,
    phi: &[f64],
    time: f64,
    kind: ScalarKind,
    table: &MultiplierTable,
    scheme: &QuadratureScheme,
) -> Result<Vec<f64>> {
    let mut state = FrontState::new(grid.clone(), phi.to_vec(), kind.partner(phi))?;
    state.time = time;
    let hat_phi = grid.forward(&state.phi);
    let hat_psi = grid.forward(&state.psi);
    let n = grid.n_points();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let a = &table.a_matrix[k];
        out.push(a[0][0] * hat_phi[k] + a[0][1] * hat_psi[k]);
    }
    let s = nonlinear_self(params, &state, FrontField::Phi, scheme)?;
    let c = nonlinear_cross(params, &state, TargetEquation::PhiEquation, scheme)?;
    let (tp, tm) = (params.theta_plus, params.theta_minus);
    let nl: Vec<f64> = s.iter().zip(&c).map(|(a, b)| -tp * a - tm * b).collect();
    let mut nl_hat = grid.forward(&nl);
    grid.dealias_hat(&mut nl_hat);
    for k in 0..n {
        out[k] += nl_hat[k];
    }
    out[0] = Complex64::new(0.0, 0.0);
    if n % 2 == 0 {
        out[n / 2] = Complex64::new(0.0, 0.0);
    }
    Ok(grid.inverse(&out))
}

/// Evolves one front on a reduction manifold with classical RK4.
pub fn run_scalar_reduction(
    params: &PhysicalParams,
    grid: Arc<SpectralGrid>,
    phi0: Vec<f64>,
    kind: ScalarKind,
    settings: &TimeSettings,
    quad_opts: &QuadratureOptions,
) -> Result<ScalarRunOutcome> {
    kind.check_params(params)?;
    if settings.stepper != StepperKind::Rk4 {
        return Err(Error::domain(
            "scalar reductions support the classical RK4 stepper only",
        ));
    }
    let table = build_multiplier_table(params, grid.xi_multiplier(), SymbolFrame::Solver)?;
    let scheme = QuadratureScheme::new(params, &grid, quad_opts)?;
    let (dt, n_steps) = resolve_dt(settings, &table, settings.t_end)?;
    let initial = FrontState::new(grid.clone(), phi0.clone(), kind.partner(&phi0))?;
    let mut warnings = Vec::new();
    if let Some(w) = amplitude_warning(params, &initial, settings.amplitude_warn_ratio) {
        warnings.push(w);
    }

    let dt_max = cfl_max_dt(&table, 1.0);
    if dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, dt_max });
    }

    let mut phi = phi0;
    let mut time = 0.0;
    let mut snapshots = vec![ScalarState {
        phi: phi.clone(),
        time,
    }];
    let mut termination = Termination::Completed;
    let mut steps_taken = 0;
    for step in 1..=n_steps {
        let stage = |p: &[f64], k: &[f64], w: f64| -> Vec<f64> {
            p.iter().zip(k).map(|(x, v)| x + w * v).collect()
        };
        let advance = (|| -> Result<Vec<f64>> {
            let k1 = scalar_rhs(params, &grid, &phi, time, kind, &table, &scheme)?;
            let k2 = scalar_rhs(
                params,
                &grid,
                &stage(&phi, &k1, 0.5 * dt),
                time + 0.5 * dt,
                kind,
                &table,
                &scheme,
            )?;
            let k3 = scalar_rhs(
                params,
                &grid,
                &stage(&phi, &k2, 0.5 * dt),
                time + 0.5 * dt,
                kind,
                &table,
                &scheme,
            )?;
            let k4 = scalar_rhs(
                params,
                &grid,
                &stage(&phi, &k3, dt),
                time + dt,
                kind,
                &table,
                &scheme,
            )?;
            let sixth = dt / 6.0;
            Ok((0..phi.len())
                .map(|i| phi[i] + sixth * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]))
                .collect())
        })();
        match advance {
            Ok(p) => {
                phi = p;
                time = step as f64 * dt;
            }
            Err(Error::ChordArc { time, margin }) => {
                termination = Termination::ChordArcViolation { time, margin };
                break;
            }
            Err(e) => return Err(e),
        }
        steps_taken = step;
        let due = settings.snapshot_every != 0 && step % settings.snapshot_every == 0;
        if (due && step != n_steps) || step == n_steps {
            snapshots.push(ScalarState {
                phi: phi.clone(),
                time,
            });
        }
    }
    if termination != Termination::Completed && steps_taken > 0 {
        if snapshots.last().map(|s| s.time) != Some(time) {
            snapshots.push(ScalarState {
                phi: phi.clone(),
                time,
            });
        }
    }
    Ok(ScalarRunOutcome {
        snapshots,
        termination,
        dt,
        steps_taken,
        warnings,
    })
}

/// Initial data along the linear eigenvector of mode index `k`: the
/// perturbation eps * Re(v exp(i xi_k x)) with v the eigenvector of the
/// faster-growing branch, normalized to unit max modulus.
pub fn eigenmode_state(
    grid: Arc<SpectralGrid>,
    params: &PhysicalParams,
    k: usize,
    eps: f64,
) -> Result<FrontState> {
    let n = grid.n_points();
    if k == 0 || k >= n / 2 {
        return Err(Error::domain(format!(
            "mode index must satisfy 1 <= k < N/2, got {k}"
        )));
    }
    let xi = grid.xi_multiplier()[k];
    let a = mode_matrix(params, xi, SymbolFrame::Stability)?;
    let (mu_p, _) = growth_rates(params, xi)?;
    // (A - mu) v = 0 rows give v up to scale; pick the better-conditioned
    // form. The solver frame shares eigenvectors (it only shifts the
    // diagonal), so the choice of frame here is immaterial.
    let v_a = [a[0][1], mu_p - a[0][0]];
    let v_b = [mu_p - a[1][1], a[1][0]];
    let norm = |v: &[Complex64; 2]| v[0].norm().max(v[1].norm());
    let v = if norm(&v_a) >= norm(&v_b) { v_a } else { v_b };
    let scale = norm(&v);
    if scale == 0.0 {
        return Err(Error::domain(
            "degenerate eigenvector; mode matrix is scalar",
        ));
    }
    let v = [v[0] / scale, v[1] / scale];
    let zero = Complex64::new(0.0, 0.0);
    let mut hp = vec![zero; n];
    let mut hq = vec![zero; n];
    hp[k] = 0.5 * eps * v[0];
    hp[n - k] = hp[k].conj();
    hq[k] = 0.5 * eps * v[1];
    hq[n - k] = hq[k].conj();
    FrontState::new(grid.clone(), grid.inverse(&hp), grid.inverse(&hq))
}

/// Growth rate of the seeded branch in the solver frame (real part is
/// frame-independent).
pub fn eigenmode_rate(params: &PhysicalParams, xi: f64) -> Result<Complex64> {
    let (mu_p, _) = growth_rates(params, xi)?;
    Ok(mu_p - Complex64::new(0.0, xi * frame_shift_velocity(params)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::grid::CosineMode;
    use crate::solver::stepper::expm2;

    const PI: f64 = std::f64::consts::PI;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn flat_run_stays_flat() {
        let p = PhysicalParams::new(1.5, 1.0, -0.4, 1.0).unwrap();
        let grid = Arc::new(SpectralGrid::new(32, 8.0).unwrap());
        let settings = TimeSettings {
            t_end: 0.5,
            snapshot_every: 2,
            ..TimeSettings::default()
        };
        let out = run_simulation(
            &p,
            FrontState::flat(grid),
            &settings,
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert_eq!(out.termination, Termination::Completed);
        assert!(out.snapshots.len() >= 2);
        let last = out.snapshots.last().unwrap();
        assert!((last.time - 0.5).abs() < 1e-12);
        assert!(last.phi.iter().chain(&last.psi).all(|&v| v == 0.0));
    }

    #[test]
    fn mirror_manifolds_are_preserved() {
        let grid = Arc::new(SpectralGrid::new(32, 2.0 * PI).unwrap());
        let settings = TimeSettings {
            dt: Some(2e-3),
            t_end: 2e-2,
            snapshot_every: 0,
            ..TimeSettings::default()
        };
        // Equal jumps, psi0 = -phi0.
        let p = PhysicalParams::new(1.0, 0.9, 0.9, 1.0).unwrap();
        let init = FrontState::cosine(grid.clone(), 2, 1e-2, CosineMode::Symmetric).unwrap();
        let out =
            run_simulation(&p, init, &settings, &QuadratureOptions::default()).unwrap();
        let last = out.snapshots.last().unwrap();
        let viol = last
            .phi
            .iter()
            .zip(&last.psi)
            .fold(0.0f64, |m, (a, b)| m.max((a + b).abs()));
        assert!(viol <= 1e-14, "symmetric manifold violated by {viol}");

        // Opposite jumps, psi0(x) = -phi0(-x).
        let p = PhysicalParams::new(1.5, 0.9, -0.9, 1.0).unwrap();
        let phi0: Vec<f64> = grid
            .x()
            .iter()
            .map(|&x| 1e-2 * (2.0 * x).cos() + 4e-3 * (3.0 * x).sin())
            .collect();
        let n = grid.n_points();
        let psi0: Vec<f64> = (0..n).map(|i| -phi0[(n - i) % n]).collect();
        let init = FrontState::new(grid.clone(), phi0, psi0).unwrap();
        let out =
            run_simulation(&p, init, &settings, &QuadratureOptions::default()).unwrap();
        let last = out.snapshots.last().unwrap();
        let viol = (0..n).fold(0.0f64, |m, i| {
            m.max((last.psi[i] + last.phi[(n - i) % n]).abs())
        });
        assert!(viol <= 1e-12, "antisymmetric manifold violated by {viol}");
    }

    #[test]
    fn scalar_runs_match_two_front_runs() {
        let grid = Arc::new(SpectralGrid::new(32, 2.0 * PI).unwrap());
        let settings = TimeSettings {
            dt: Some(2e-3),
            t_end: 2e-2,
            snapshot_every: 0,
            ..TimeSettings::default()
        };
        let cases = [
            (ScalarKind::Symmetric, 0.9, 0.9),
            (ScalarKind::Antisymmetric, 0.9, -0.9),
        ];
        for (kind, tp, tm) in cases {
            let p = PhysicalParams::new(1.0, tp, tm, 1.0).unwrap();
            let phi0: Vec<f64> = grid
                .x()
                .iter()
                .map(|&x| 1e-2 * (2.0 * x).cos() + 4e-3 * (3.0 * x).sin())
                .collect();
            let two = run_simulation(
                &p,
                FrontState::new(grid.clone(), phi0.clone(), kind.partner(&phi0)).unwrap(),
                &settings,
                &QuadratureOptions::default(),
            )
            .unwrap();
            let one = run_scalar_reduction(
                &p,
                grid.clone(),
                phi0,
                kind,
                &settings,
                &QuadratureOptions::default(),
            )
            .unwrap();
            let a = &two.snapshots.last().unwrap().phi;
            let b = &one.snapshots.last().unwrap().phi;
            let diff = max_abs_diff(a, b);
            assert!(diff <= 1e-13, "{kind:?}: scalar vs two-front {diff}");
        }
    }

    #[test]
    fn scalar_reduction_rejects_mismatched_jumps() {
        let p = PhysicalParams::new(1.0, 1.0, 0.5, 1.0).unwrap();
        let grid = Arc::new(SpectralGrid::new(16, 8.0).unwrap());
        let err = run_scalar_reduction(
            &p,
            grid.clone(),
            vec![0.0; 16],
            ScalarKind::Symmetric,
            &TimeSettings::default(),
            &QuadratureOptions::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn translation_equivariance_of_a_step() {
        let p = PhysicalParams::new(1.0, 1.0, -1.0, 1.0).unwrap();
        let grid = Arc::new(SpectralGrid::new(32, 2.0 * PI).unwrap());
        let settings = TimeSettings {
            dt: Some(1e-3),
            t_end: 1e-3,
            snapshot_every: 0,
            ..TimeSettings::default()
        };
        let phi0: Vec<f64> = grid
            .x()
            .iter()
            .map(|&x| 1e-2 * (2.0 * x).cos() + 3e-3 * (5.0 * x).sin())
            .collect();
        let psi0: Vec<f64> = grid.x().iter().map(|&x| 8e-3 * (3.0 * x).sin()).collect();
        let rot = |v: &[f64]| -> Vec<f64> {
            let n = v.len();
            (0..n).map(|i| v[(i + n - 1) % n]).collect()
        };
        let run = |phi: Vec<f64>, psi: Vec<f64>| {
            let out = run_simulation(
                &p,
                FrontState::new(grid.clone(), phi, psi).unwrap(),
                &settings,
                &QuadratureOptions::default(),
            )
            .unwrap();
            out.snapshots.last().unwrap().clone()
        };
        let plain = run(phi0.clone(), psi0.clone());
        let shifted = run(rot(&phi0), rot(&psi0));
        let dp = max_abs_diff(&rot(&plain.phi), &shifted.phi);
        let dq = max_abs_diff(&rot(&plain.psi), &shifted.psi);
        assert!(dp.max(dq) <= 1e-10, "equivariance violated: {dp} {dq}");
    }

    #[test]
    fn chord_arc_violation_terminates_cleanly() {
        let p = PhysicalParams::new(1.0, 1.0, -1.0, 0.05).unwrap();
        let grid = Arc::new(SpectralGrid::new(32, 2.0 * PI).unwrap());
        // Fronts separated by 2h = 0.1 but perturbed by 0.06 each: margin
        // is negative from the start.
        let init = FrontState::cosine(grid, 2, 0.06, CosineMode::Symmetric).unwrap();
        let settings = TimeSettings {
            dt: Some(1e-4),
            t_end: 1e-2,
            ..TimeSettings::default()
        };
        let out =
            run_simulation(&p, init, &settings, &QuadratureOptions::default()).unwrap();
        match out.termination {
            Termination::ChordArcViolation { margin, .. } => assert!(margin <= 0.0),
            other => panic!("expected chord-arc halt, got {other:?}"),
        }
        assert_eq!(out.steps_taken, 0);
    }

    #[test]
    fn runs_are_deterministic() {
        let p = PhysicalParams::new(1.5, 1.0, -0.8, 1.0).unwrap();
        let grid = Arc::new(SpectralGrid::new(32, 2.0 * PI).unwrap());
        let settings = TimeSettings {
            dt: Some(1e-3),
            t_end: 1e-2,
            snapshot_every: 3,
            ..TimeSettings::default()
        };
        let mk = || {
            run_simulation(
                &p,
                FrontState::cosine(grid.clone(), 2, 1e-2, CosineMode::PhiOnly).unwrap(),
                &settings,
                &QuadratureOptions::default(),
            )
            .unwrap()
        };
        let a = mk();
        let b = mk();
        assert_eq!(a.snapshots.len(), b.snapshots.len());
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            assert_eq!(sa.phi, sb.phi);
            assert_eq!(sa.psi, sb.psi);
        }
    }

    #[test]
    fn amplitude_gate_warns_at_low_alpha() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let grid = Arc::new(SpectralGrid::new(32, 2.0 * PI).unwrap());
        let init = FrontState::cosine(grid, 2, 0.5, CosineMode::Symmetric).unwrap();
        let settings = TimeSettings {
            dt: Some(1e-4),
            t_end: 1e-4,
            ..TimeSettings::default()
        };
        let out =
            run_simulation(&p, init, &settings, &QuadratureOptions::default()).unwrap();
        assert!(!out.warnings.is_empty());
    }

    #[test]
    fn eigenmode_is_exact_under_linear_flow() {
        // E(dt) applied to a true eigenvector scales it by exp(mu dt);
        // verified through the public seeding + closed-form exponential.
        let p = PhysicalParams::new(1.0, 1.0, -1.0, 1.0).unwrap();
        let grid = Arc::new(SpectralGrid::new(64, 4.0 * PI / 0.51756).unwrap());
        let k = 2;
        let eps = 1e-4;
        let state = eigenmode_state(grid.clone(), &p, k, eps).unwrap();
        let xi = grid.xi_multiplier()[k];
        let a = mode_matrix(&p, xi, SymbolFrame::Solver).unwrap();
        let dt = 0.3;
        let e = expm2(&a, dt);
        let hp = grid.forward(&state.phi);
        let hq = grid.forward(&state.psi);
        let evolved = [
            e[0][0] * hp[k] + e[0][1] * hq[k],
            e[1][0] * hp[k] + e[1][1] * hq[k],
        ];
        let mu = eigenmode_rate(&p, xi).unwrap();
        let expect = [
            (mu * dt).exp() * hp[k],
            (mu * dt).exp() * hq[k],
        ];
        for (got, want) in evolved.iter().zip(&expect) {
            assert!(
                (got - want).norm() <= 1e-10 * eps,
                "eigen evolution {got} vs {want}"
            );
        }
        // The mode is genuinely unstable here.
        assert!(mu.re > 0.3);
    }
}
