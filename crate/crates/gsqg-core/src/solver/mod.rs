//! Time evolution of the two-front systems on a periodic grid: spectral
//! linear part, contour-integral quadrature for the nonlinear part, RK4
//! and integrating-factor steppers, and the symmetric / antisymmetric
//! scalar reductions.

mod grid;
pub(crate) mod quad;
mod rhs;
mod run;
mod stepper;

pub use grid::{CosineMode, FrontState, SpectralGrid};
pub use quad::{
    nonlinear_cross, nonlinear_self, FrontField, QuadratureOptions, QuadratureScheme,
    TargetEquation,
};
pub use rhs::{nonlinear_hat, rhs, rhs_with_mode, RhsMode};
pub use run::{
    eigenmode_rate, eigenmode_state, run_scalar_reduction, run_simulation, RunOutcome,
    ScalarKind, ScalarRunOutcome, ScalarState, StepperKind, Termination, TimeSettings,
};
pub use stepper::{cfl_max_dt, expm2, step_if_rk4, step_rk4, IntegratingFactor};
