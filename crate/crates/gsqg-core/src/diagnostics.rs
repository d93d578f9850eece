//! Front-geometry and conserved-quantity monitors: chord-arc margin,
//! L2 norms, energy, and exponential-rate fitting.
//!
//! The two-front systems conserve an energy of the form
//!
//!   E = 1/2 int [ v Th+ phi^2 - v Th- psi^2 + Th+^2 phi L1 phi
//!       + 2 Th+ Th- phi L2 psi + Th-^2 psi L1 psi ] dx
//!     - 1/2 intint [ Th+^2 F1(x - x', phi - phi')
//!       + 2 Th+ Th- F2(x - x', phi - psi') + Th-^2 F1(x - x', psi - psi') ]
//!       dx dx'
//!
//! where F1(zeta, .) and F2(zeta, .) are second antiderivatives of the
//! same-front and cross-front kernel differences (see
//! [`crate::kernels::kernel_h`] for the once-integrated kernels), both
//! normalized to vanish on flat fronts. The relative minus sign is
//! forced: with the gradient structure f_t = -(1/Th) d/dx dE/df that
//! reproduces the multiplier part of the evolution, the kernels' parity
//! (even in separation, odd in height difference) flips the sign of the
//! pair part's variational derivative, so conservation requires it
//! subtracted. The short-run conservation test pins this down: with the
//! opposite sign the energy drifts at cubic order in amplitude,
//! independent of step size and resolution.
//!
//! On the periodic cell the double integral becomes a tensor trapezoid
//! over node pairs at minimal-image separation plus `n_images` explicit
//! periodic copies; no equality with the real-line functional is
//! claimed, only the conservation property.
//!
//! Two normalization choices shift E by constants of motion and are
//! therefore free:
//!
//!   * mean modes are excluded from the quadratic part (the regularized
//!     symbols do not act on them, and front means are conserved);
//!   * the cross antiderivative drops its term linear in the height
//!     difference d: summed over the tensor grid that term is
//!     (sum_zeta H2(zeta, 2h)) * N * (mean phi - mean psi), again a
//!     constant of motion. Dropping it keeps every remaining integrand
//!     regular, including the zeta = 0 column.
//!
//! Both antiderivatives are evaluated by one adaptive quadrature in the
//! height variable over the algebraically cancellation-free kernel
//! differences, so perturbation-scale arguments (where the kernel
//! difference underflows the kernel itself by many digits) keep full
//! relative accuracy.

use rayon::prelude::*;

use crate::adaptive::adaptive_simpson;
use crate::error::{Error, Result};
use crate::kernels::galilean_constants;
use crate::params::PhysicalParams;
use crate::solver::quad::Kernel;
use crate::solver::{FrontState, QuadratureScheme, SpectralGrid};
use crate::special_fn::hurwitz_zeta;
use crate::symbols::{symbol_b1_effective, symbol_b2};

/// Relative tolerance of the per-pair antiderivative quadratures.
const PAIR_TOL_REL: f64 = 1e-8;

/// Monitored quantities of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub time: f64,
    pub l2_phi: f64,
    pub l2_psi: f64,
    /// min over nodes of 2h - psi + phi; > 0 for states the solver accepts.
    pub chord_margin: f64,
    /// max over nodes and both fronts of the spectral slope |f_x|.
    pub max_slope: f64,
    pub hamiltonian: Option<f64>,
}

/// Minimum over grid nodes of the front-separation margin 2h - psi + phi.
pub fn chord_margin(params: &PhysicalParams, state: &FrontState) -> f64 {
    let two_h = 2.0 * params.h;
    state
        .phi
        .iter()
        .zip(&state.psi)
        .map(|(&p, &q)| two_h - q + p)
        .fold(f64::INFINITY, f64::min)
}

/// ||f||_{L2} on the periodic cell: sqrt(dx sum f^2).
pub fn l2_norm(grid: &SpectralGrid, f: &[f64]) -> f64 {
    (grid.dx() * f.iter().map(|&x| x * x).sum::<f64>()).sqrt()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// Spectral-multiplier part of the energy,
/// (L/2) sum_k [ v Th+ |phi_k|^2 - v Th- |psi_k|^2 + Th+^2 b1 |phi_k|^2
///              + 2 Th+ Th- b2 Re(conj(phi_k) psi_k) + Th-^2 b1 |psi_k|^2 ],
/// over modes with nonzero wavenumber, with b1 the per-regime
/// regularized symbol. Quadratic in the state; the full energy differs
/// from it at third order in amplitude.
pub fn quadratic_energy(params: &PhysicalParams, state: &FrontState) -> Result<f64> {
    let g = &*state.grid;
    let v = galilean_constants(params)?.v;
    let (tp, tm) = (params.theta_plus, params.theta_minus);
    let a_phi = g.forward(&state.phi);
    let a_psi = g.forward(&state.psi);
    let mut acc = 0.0;
    for (k, &xi) in g.xi_multiplier().iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        let b1 = symbol_b1_effective(params.alpha, xi)?;
        let b2 = symbol_b2(params, xi)?;
        let p2 = a_phi[k].norm_sqr();
        let q2 = a_psi[k].norm_sqr();
        let pq = (a_phi[k].conj() * a_psi[k]).re;
        acc += v * (tp * p2 - tm * q2)
            + tp * tp * b1 * p2
            + 2.0 * tp * tm * b2 * pq
            + tm * tm * b1 * q2;
    }
    Ok(0.5 * g.length() * acc)
}

/// int_0^y (y - u) [G(sqrt(zeta^2 + u^2)) - G(|zeta|)] du: the
/// same-front pair energy F1(zeta, y), second y-antiderivative of the
/// kernel difference with F1 = F1_y = 0 at y = 0. Needs zeta != 0.
fn same_front_pair(kernel: Kernel, zeta: f64, y: f64) -> Result<f64> {
    debug_assert!(zeta != 0.0);
    if y == 0.0 {
        return Ok(0.0);
    }
    let base2 = zeta * zeta;
    // |D1| is largest at u = y, so this bounds the integral's magnitude.
    let scale = 0.5 * y * y * kernel.diff_at(base2, y * y).abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    adaptive_simpson(
        &|u: f64| (y - u) * kernel.diff_at(base2, u * u),
        0.0,
        y,
        PAIR_TOL_REL * scale,
    )
}

/// int_0^d (d - s) [G(sqrt(zeta^2 + (2h+s)^2)) - G(sqrt(zeta^2 + 4h^2))] ds:
/// the cross-front pair energy F2(zeta, d) expanded about the flat
/// separation, with its linear term dropped (see the module docs).
/// Regular for all zeta while 2h + d > 0.
fn cross_front_pair(kernel: Kernel, h: f64, zeta: f64, d: f64) -> Result<f64> {
    if d == 0.0 {
        return Ok(0.0);
    }
    let base2 = zeta * zeta + 4.0 * h * h;
    // (2h+s)^2 - 4h^2 = s (4h + s); |D2| is monotone in s.
    let scale = 0.5 * d * d * kernel.diff_at(base2, d * (4.0 * h + d)).abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    adaptive_simpson(
        &|s: f64| (d - s) * kernel.diff_at(base2, s * (4.0 * h + s)),
        0.0,
        d,
        PAIR_TOL_REL * scale,
    )
}

/// The conserved energy of the state: [`quadratic_energy`] plus the
/// pair-interaction part (1/2) dx^2 sum_{i,j,|m| <= n_images} over node
/// pairs at separation zeta_ij + m L. Flat fronts score exactly 0.
/// O(N^2) work. Errors on chord-arc violation or a scheme built for a
/// different problem.
pub fn hamiltonian(
    params: &PhysicalParams,
    state: &FrontState,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    scheme.check_state(state)?;
    scheme.check_params(params)?;
    let margin = chord_margin(params, state);
    if margin <= 0.0 {
        return Err(Error::ChordArc {
            time: state.time,
            margin,
        });
    }

    let quadratic = quadratic_energy(params, state)?;

    let g = &*state.grid;
    let n = g.n_points();
    let length = g.length();
    let dx = g.dx();
    let kernel = scheme.kernel();
    let h = params.h;
    let (tp, tm) = (params.theta_plus, params.theta_minus);
    let (c_phi, c_cross, c_psi) = (tp * tp, 2.0 * tp * tm, tm * tm);
    let images = scheme.n_images as isize;

    // Minimal-image separation of node offset r: r dx wrapped to (-L/2, L/2].
    let sep = |r: usize| {
        let z = r as f64 * dx;
        if z > 0.5 * length {
            z - length
        } else {
            z
        }
    };

    // Periodic image shells |m| > n_images, completed with the leading
    // kernel asymptotics D ~ kappa2 num |zeta|^{alpha-4} exactly as the
    // evolution quadrature does (finitely many shells plus a Hurwitz
    // zeta remainder); integrated twice in the height variable this
    // turns F1 into kappa2 R y^4/12 and the cross pair into
    // kappa2 R (4h d^3/6 + d^4/12) per uncovered shell sum R.
    let alpha = params.alpha;
    let kappa2 = kernel.asym_coeff();
    let m0 = images + 1;
    const EXACT_SHELLS: isize = 32;
    let mut r_self = vec![0.0; n];
    let mut r_cross = vec![0.0; n];
    for r in 0..n {
        let z = sep(r);
        let (mut s_self, mut s_cross) = (0.0, 0.0);
        for m in m0..m0 + EXACT_SHELLS {
            for sgn in [1.0, -1.0] {
                let zz = z + sgn * m as f64 * length;
                s_self += zz.abs().powf(alpha - 4.0);
                s_cross += (zz * zz + 4.0 * h * h).powf(0.5 * (alpha - 4.0));
            }
        }
        let a0 = (m0 + EXACT_SHELLS) as f64;
        let rem = length.powf(alpha - 4.0)
            * (hurwitz_zeta(4.0 - alpha, a0 + z / length)?
                + hurwitz_zeta(4.0 - alpha, a0 - z / length)?);
        r_self[r] = s_self + rem;
        r_cross[r] = s_cross + rem;
    }

    let phi = &state.phi;
    let psi = &state.psi;
    let pair_sum = (0..n)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut acc = 0.0;
            for j in 0..n {
                let roff = (n + i - j) % n;
                let z0 = sep(roff);
                let d_phi = phi[i] - phi[j];
                let d_psi = psi[i] - psi[j];
                let d_cross = phi[i] - psi[j];
                for m in -images..=images {
                    let z = z0 + m as f64 * length;
                    if z != 0.0 {
                        acc += c_phi * same_front_pair(kernel, z, d_phi)?
                            + c_psi * same_front_pair(kernel, z, d_psi)?;
                    }
                    acc += c_cross * cross_front_pair(kernel, h, z, d_cross)?;
                }
                let quartic = |y: f64| y * y * y * y / 12.0;
                acc += kappa2
                    * (r_self[roff] * (c_phi * quartic(d_phi) + c_psi * quartic(d_psi))
                        + r_cross[roff]
                            * c_cross
                            * (2.0 * h * d_cross.powi(3) / 3.0 + quartic(d_cross)));
            }
            Ok(acc)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a + b))?;

    Ok(quadratic - 0.5 * dx * dx * pair_sum)
}

/// All monitors of one state; the energy only when `with_energy` (it is
/// the one O(N^2) entry).
pub fn record(
    params: &PhysicalParams,
    state: &FrontState,
    scheme: &QuadratureScheme,
    with_energy: bool,
) -> Result<DiagnosticRecord> {
    let g = &*state.grid;
    let slope = |f: &[f64]| {
        let mut hat = g.forward(f);
        g.derivative_hat(&mut hat);
        max_abs(&g.inverse(&hat))
    };
    Ok(DiagnosticRecord {
        time: state.time,
        l2_phi: l2_norm(g, &state.phi),
        l2_psi: l2_norm(g, &state.psi),
        chord_margin: chord_margin(params, state),
        max_slope: slope(&state.phi).max(slope(&state.psi)),
        hamiltonian: if with_energy {
            Some(hamiltonian(params, state, scheme)?)
        } else {
            None
        },
    })
}

/// A priori scale for energy drift over `t_span`: the quadrature's
/// quartic tail estimate for this state propagated through the
/// functional gradient (symbol scale taken over the modes actually
/// carrying amplitude), plus an evaluation floor. Conservation checks
/// assert measured drift within a small multiple of this.
pub fn energy_drift_tolerance(
    params: &PhysicalParams,
    state: &FrontState,
    scheme: &QuadratureScheme,
    t_span: f64,
) -> Result<f64> {
    scheme.check_state(state)?;
    scheme.check_params(params)?;
    let g = &*state.grid;
    let amp = max_abs(&state.phi).max(max_abs(&state.psi));
    let (tp, tm) = (params.theta_plus.abs(), params.theta_minus.abs());
    let v = galilean_constants(params)?.v.abs();
    let a_phi = g.forward(&state.phi);
    let a_psi = g.forward(&state.psi);
    let thresh = 1e-13 * amp.max(f64::MIN_POSITIVE);
    let mut b_max = 0.0f64;
    for (k, &xi) in g.xi_multiplier().iter().enumerate() {
        if xi == 0.0 || (a_phi[k].norm() <= thresh && a_psi[k].norm() <= thresh) {
            continue;
        }
        b_max = b_max
            .max(symbol_b1_effective(params.alpha, xi)?.abs())
            .max(symbol_b2(params, xi)?);
    }
    let grad = tp.max(tm) * (v + (tp + tm) * b_max) * amp;
    let floor = 1e-12 * (1.0 + quadratic_energy(params, state)?.abs());
    Ok(t_span * grad * g.length() * scheme.tail_bound_for_state(state) + floor)
}

/// Least-squares slope of ln(amplitude) against time over `samples` of
/// (t, amplitude). Needs at least two distinct times and positive
/// finite amplitudes.
pub fn fit_exponential_rate(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::domain("rate fit needs at least two samples"));
    }
    let n = samples.len() as f64;
    let (mut st, mut sy) = (0.0, 0.0);
    for &(t, a) in samples {
        if !(a > 0.0 && a.is_finite() && t.is_finite()) {
            return Err(Error::domain(format!(
                "rate fit needs positive finite amplitudes, got ({t}, {a})"
            )));
        }
        st += t;
        sy += a.ln();
    }
    let (tbar, ybar) = (st / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(t, a) in samples {
        let dt = t - tbar;
        sxx += dt * dt;
        sxy += dt * (a.ln() - ybar);
    }
    if sxx == 0.0 {
        return Err(Error::domain("rate fit needs at least two distinct times"));
    }
    Ok(sxy / sxx)
}
