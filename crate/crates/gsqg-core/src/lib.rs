//! Contour dynamics for two-front solutions of the generalized surface
//! quasi-geostrophic (GSQG) family of active-scalar flows.
//!
//! The scalar theta is advected by u = grad-perp (-Laplace)^{-alpha/2} theta
//! with alpha in (0, 2]; alpha = 1 is the SQG equation and alpha = 2 the
//! incompressible Euler equations (theta = -vorticity). Two fronts located
//! at y = h + phi(x, t) and y = -h + psi(x, t) separate three regions of
//! constant theta. After regularizing the divergent single-front terms by a
//! Galilean change of frame, the front perturbations satisfy a closed pair
//! of nonlocal evolution equations that this crate evaluates, linearizes,
//! and integrates in time:
//!
//! * [`special_fn`] - Gamma/Beta and modified Bessel K_nu evaluations.
//! * [`kernels`] - Green's-function kernels and the Galilean constants.
//! * [`symbols`] - Fourier multipliers b1, b2 and the linearized system
//!   matrix A(xi) per grid mode.
//! * [`stability`] - dispersion relation mu(xi), discriminant, marginal
//!   and peak-growth wavenumber searches.
//! * [`expansion`] - multilinear (in amplitude) expansion of the
//!   nonlinearity: Taylor coefficients, odd-kernel moments T_n, and a
//!   series evaluation used as an independent oracle for the solver.
//! * [`solver`] - pseudo-spectral periodic discretization, nonlinear
//!   contour quadrature, RK4 / integrating-factor steppers, and the
//!   symmetric / antisymmetric scalar reductions.
//! * [`diagnostics`] - conserved-quantity and front-geometry monitors.
//!
//! All numerics are f64. Parameters are bundled in [`PhysicalParams`];
//! states live on the power-of-two periodic grid in [`solver::SpectralGrid`].

mod adaptive;
pub mod diagnostics;
pub mod error;
pub mod expansion;
pub mod kernels;
pub mod params;
pub mod solver;
pub mod special_fn;
pub mod stability;
pub mod symbols;

pub use error::{Error, Result};
pub use params::PhysicalParams;
