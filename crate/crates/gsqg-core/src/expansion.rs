//! Multilinear small-amplitude expansion of the two-front nonlinearities:
//! Taylor coefficients c_n (and the log-kernel analogue at alpha = 2),
//! the across-gap coefficient families d_{n,l,m,i}, the odd oscillatory
//! kernel T_n, and a truncated-series evaluation of the nonlinear terms
//! used as an independent oracle for the solver's contour quadrature.
//!
//! Expanding the self-interaction kernel in powers of the height
//! difference gives, for each n >= 1, a (2n+1)-linear term whose Fourier
//! kernel is
//!
//!   T_n(eta) = int_R prod_{j=1}^{2n+1} (1 - e^{i eta_j zeta})
//!              zeta^{-(2n+1)} |zeta|^{alpha-1} sgn(zeta) dzeta,
//!
//! weighted by c_n/(2n+1) for alpha < 2 and by c~_n = (-1)^n/(2n(2n+1))
//! (with an overall 1/(2 pi)) at alpha = 2. The across-gap kernel expands
//! into powers of phi and psi with coefficients d_{n,l,m,1} (phi equation)
//! and d_{n,l,m,2} = (-1)^l d_{n,l,m,1} (psi equation); the Fourier
//! multiplier |xi|^nu K_nu(2h|xi|), nu = n + (1-alpha)/2, carries the
//! psi^m factors across the gap.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::adaptive::{adaptive_simpson, adaptive_simpson_c64};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::solver::{FrontState, SpectralGrid};
use crate::special_fn::{bessel_k, gamma_fn};

const PI: f64 = std::f64::consts::PI;

/// Default truncation order; in the amplitude regime the solver is
/// validated against (eps <= 1e-2) the omitted terms are < 1e-10.
pub const DEFAULT_N_MAX: usize = 4;

/// Taylor coefficient c_n of (1 + x)^{-1 + alpha/2} = 1 + sum c_n x^n,
/// c_n = Gamma(alpha/2) / (Gamma(n+1) Gamma(alpha/2 - n)), computed by
/// the recurrence c_1 = alpha/2 - 1, c_{n+1} = c_n (alpha/2 - n - 1)/(n + 1)
/// so no near-pole Gamma evaluations occur.
pub fn coeff_c(alpha: f64, n: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::domain(format!(
            "c_n is defined for alpha in (0, 2), got {alpha}"
        )));
    }
    if n < 1 {
        return Err(Error::domain("c_n needs n >= 1"));
    }
    let mut c = 0.5 * alpha - 1.0;
    for k in 1..n {
        c *= (0.5 * alpha - k as f64 - 1.0) / (k as f64 + 1.0);
    }
    Ok(c)
}

/// Coefficient of the alpha = 2 log-kernel expansion, (-1)^n / (2n(2n+1)).
pub fn coeff_c_tilde(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("c~_n needs n >= 1"));
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign / ((2 * n) as f64 * (2 * n + 1) as f64))
}

/// Which member of the across-gap coefficient family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DVariant {
    /// d_{n,l}: binomial split of [-4h D + D^2]^n (requires m = 0).
    Plain,
    /// d_{n,l,m}: further split of the height difference into phi, psi
    /// powers.
    MIndexed,
    /// d_{n,l,m,1}: coefficient as it enters the phi (upper-front)
    /// equation, with the m = 0 gap moment or the m >= 1 Bessel
    /// prefactor folded in.
    UpperEquation,
    /// d_{n,l,m,2} = (-1)^l d_{n,l,m,1}: psi (lower-front) equation.
    LowerEquation,
}

/// Exact value of the gap moment int_R (zeta^2 + (2h)^2)^{-p} dzeta
/// = B(1/2, p - 1/2) (2h)^{1-2p}; this is the factor the m = 0 terms
/// absorb.
fn gap_moment(p: f64, h: f64) -> Result<f64> {
    Ok(PI.sqrt() * gamma_fn(p - 0.5)? / gamma_fn(p)? * (2.0 * h).powf(1.0 - 2.0 * p))
}

/// Across-gap expansion coefficient. `m` must be 0 for `Plain`; otherwise
/// 0 <= m <= 2n - l + 1 and 0 <= l <= n, n >= 1. At alpha = 2 the
/// log-kernel family (Gamma(n)-based, with the extra (-1)^n/2 factors)
/// is evaluated instead.
pub fn coeff_d(
    params: &PhysicalParams,
    n: usize,
    l: usize,
    m: usize,
    variant: DVariant,
) -> Result<f64> {
    if n < 1 || l > n {
        return Err(Error::domain(format!(
            "d coefficients need n >= 1 and l <= n, got n={n} l={l}"
        )));
    }
    let top = 2 * n - l + 1;
    match variant {
        DVariant::Plain => {
            if m != 0 {
                return Err(Error::domain("the l-indexed coefficient carries no m"));
            }
        }
        _ => {
            if m > top {
                return Err(Error::domain(format!(
                    "d coefficients need m <= 2n - l + 1 = {top}, got m={m}"
                )));
            }
        }
    }
    let (alpha, h) = (params.alpha, params.h);
    let nf = n as f64;
    let lf = l as f64;
    let mf = m as f64;
    let euler = alpha == 2.0;

    // Common skeleton: the sign-free parts of d_{n,l} / d~_{n,l}.
    let head = if euler {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * gamma_fn(nf)?
            / (2.0 * (top as f64) * gamma_fn(lf + 1.0)? * gamma_fn(nf + 1.0 - lf)?)
    } else {
        gamma_fn(0.5 * alpha)?
            / ((top as f64)
                * gamma_fn(lf + 1.0)?
                * gamma_fn(nf + 1.0 - lf)?
                * gamma_fn(0.5 * alpha - nf)?)
    };
    let plain = head * (-4.0 * h).powi(l as i32);
    if variant == DVariant::Plain {
        return Ok(plain);
    }

    let m_indexed = {
        // Power family: d_{n,l,m} = d_{n,l} * (-1)^{top - m} C(top, m);
        // log family:  d~_{n,l,m} = d~_{n,l} * (-1)^m C(top, m).
        // Both follow from expanding (psi' - phi)^top with the family's
        // sign bookkeeping; at m = 0 the power family flips (top is odd
        // for l = 0) while the log family does not.
        let flips = if euler { m } else { top - m };
        let sign = if flips % 2 == 0 { 1.0 } else { -1.0 };
        let binom = gamma_fn(top as f64 + 1.0)?
            / (gamma_fn(mf + 1.0)? * gamma_fn(top as f64 - mf + 1.0)?);
        plain * sign * binom
    };
    if variant == DVariant::MIndexed {
        return Ok(m_indexed);
    }

    let nu = nf + 0.5 * (1.0 - alpha);
    let upper = if m == 0 {
        m_indexed * gap_moment(nf + 1.0 - 0.5 * alpha, h)?
    } else {
        m_indexed * 2.0 * PI.sqrt()
            / (gamma_fn(nf + 1.0 - 0.5 * alpha)? * (4.0 * h).powf(nu))
    };
    Ok(match variant {
        DVariant::UpperEquation => upper,
        DVariant::LowerEquation => {
            if l % 2 == 0 {
                upper
            } else {
                -upper
            }
        }
        _ => unreachable!(),
    })
}

/// One tail integral E(sigma) = int_2^inf e^{i sigma zeta} zeta^{-beta}
/// dzeta (beta > 1): dyadic blocks while the phase is slow, then the
/// contour rotated to zeta = Z + it where e^{i sigma zeta} decays.
fn tail_exp_integral(beta: f64, sigma: f64, tol: f64) -> Result<Complex64> {
    if sigma == 0.0 {
        return Ok(Complex64::new(2f64.powf(1.0 - beta) / (beta - 1.0), 0.0));
    }
    let s = sigma.abs();
    let dir = sigma.signum();
    let mut z = 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    while s * z < 10.0 {
        if z.powf(1.0 - beta) / (beta - 1.0) < tol {
            return Ok(acc);
        }
        let z2 = 2.0 * z;
        acc += adaptive_simpson_c64(
            &|zeta: f64| Complex64::new(0.0, sigma * zeta).exp() * zeta.powf(-beta),
            z,
            z2,
            0.02 * tol,
        )?;
        z = z2;
    }
    let pref = Complex64::new(0.0, dir) * Complex64::new(0.0, sigma * z).exp() / s;
    let rotated = adaptive_simpson_c64(
        &|u: f64| (-u).exp() * Complex64::new(z, dir * u / s).powf(-beta),
        0.0,
        45.0,
        0.2 * tol * s,
    )?;
    Ok(acc + pref * rotated)
}

/// Odd multilinear kernel T_n(eta), `etas` of length 2n + 1.
///
/// |zeta| <= 2 uses the exact sine-product form of the real part of the
/// integrand (no 1 - e^{i theta} cancellation); |zeta| > 2 expands the
/// product over subsets and evaluates each exponential tail integral by
/// [`tail_exp_integral`], summing both half-axes independently so that
/// the imaginary parts must cancel; a residual >= 1e-9 is reported as a
/// convergence error.
pub fn kernel_tn(alpha: f64, n: usize, etas: &[f64]) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    if n < 1 || etas.len() != 2 * n + 1 {
        return Err(Error::domain(format!(
            "T_n needs 2n + 1 arguments with n >= 1, got n={n} with {} etas",
            etas.len()
        )));
    }
    if !etas.iter().all(|e| e.is_finite()) {
        return Err(Error::domain("T_n needs finite arguments"));
    }
    if etas.iter().any(|&e| e == 0.0) {
        return Ok(0.0); // a vanishing factor kills the integrand
    }
    let beta = 2.0 * n as f64 + 2.0 - alpha;
    let s_sum: f64 = etas.iter().sum();
    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    let pow2 = 2f64.powi(2 * n as i32 + 2);
    let prod_abs: f64 = etas.iter().map(|e| e.abs()).product();
    let scale = (2f64.powf(1.0 + alpha) / alpha * prod_abs
        + 2f64.powf(1.0 + alpha) / (3.0 - alpha))
    .min(1e4)
    .max(1.0);

    let near_f = |z: f64| -> f64 {
        if z == 0.0 {
            return 0.0;
        }
        let mut p = (0.5 * s_sum * z).sin();
        for &e in etas {
            p *= (0.5 * e * z).sin();
        }
        sign_n * pow2 * p / z.powf(beta)
    };
    // zeta = t^2 turns the zeta^alpha cusp at the origin into t^{2 alpha + 1}
    let near = adaptive_simpson(
        &|t: f64| 2.0 * t * near_f(t * t),
        0.0,
        2f64.sqrt(),
        1e-12 * scale,
    )?;

    let snap = 1e-12 * etas.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let n_subsets = 1usize << (2 * n + 1);
    let tol_e = 1e-12 * scale / n_subsets as f64;
    let mut tail = Complex64::new(0.0, 0.0);
    for mask in 0..n_subsets {
        let mut sigma = 0.0;
        let mut parity = 0usize;
        for (j, &e) in etas.iter().enumerate() {
            if mask & (1 << j) != 0 {
                sigma += e;
                parity += 1;
            }
        }
        if sigma.abs() < snap {
            sigma = 0.0;
        }
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        tail += sign * (tail_exp_integral(beta, sigma, tol_e)?
            + tail_exp_integral(beta, -sigma, tol_e)?);
    }
    if tail.im.abs() >= 1e-9 {
        return Err(Error::Convergence(format!(
            "T_n tail imaginary residual {} exceeds 1e-9",
            tail.im
        )));
    }
    Ok(near + tail.re)
}

/// Coefficient tables for a fixed (alpha, h, n_max).
#[derive(Debug, Clone)]
pub struct ExpansionTables {
    pub alpha: f64,
    pub h: f64,
    pub n_max: usize,
    /// c_n for n = 1..=n_max (alpha < 2); empty at alpha = 2.
    pub c: Vec<f64>,
    /// c~_n for n = 1..=n_max (alpha = 2); empty otherwise.
    pub c_tilde: Vec<f64>,
    /// d_{n,l,m,1} indexed [n-1][l][m].
    pub d_upper: Vec<Vec<Vec<f64>>>,
    /// d_{n,l,m,2} indexed [n-1][l][m].
    pub d_lower: Vec<Vec<Vec<f64>>>,
}

impl ExpansionTables {
    pub fn new(params: &PhysicalParams, n_max: usize) -> Result<Self> {
        if n_max < 1 || n_max > 16 {
            return Err(Error::domain(format!(
                "n_max must lie in 1..=16, got {n_max}"
            )));
        }
        let euler = params.alpha == 2.0;
        let mut c = Vec::new();
        let mut c_tilde = Vec::new();
        for n in 1..=n_max {
            if euler {
                c_tilde.push(coeff_c_tilde(n)?);
            } else {
                c.push(coeff_c(params.alpha, n)?);
            }
        }
        let mut d_upper = Vec::with_capacity(n_max);
        let mut d_lower = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut row_u = Vec::with_capacity(n + 1);
            let mut row_l = Vec::with_capacity(n + 1);
            for l in 0..=n {
                let top = 2 * n - l + 1;
                let mut col_u = Vec::with_capacity(top + 1);
                let mut col_l = Vec::with_capacity(top + 1);
                for m in 0..=top {
                    col_u.push(coeff_d(params, n, l, m, DVariant::UpperEquation)?);
                    col_l.push(coeff_d(params, n, l, m, DVariant::LowerEquation)?);
                }
                row_u.push(col_u);
                row_l.push(col_l);
            }
            d_upper.push(row_u);
            d_lower.push(row_l);
        }
        Ok(Self {
            alpha: params.alpha,
            h: params.h,
            n_max,
            c,
            c_tilde,
            d_upper,
            d_lower,
        })
    }

    /// Weight of the degree-n self term: c_n/(2n+1), or c~_n at alpha = 2.
    pub fn self_weight(&self, n: usize) -> f64 {
        if self.alpha == 2.0 {
            self.c_tilde[n - 1]
        } else {
            self.c[n - 1] / (2 * n + 1) as f64
        }
    }
}

/// Truncated-series value of the nonlinear right-hand sides.
#[derive(Debug, Clone)]
pub struct SeriesRhs {
    /// Nonlinear part of d phi / dt on the grid nodes.
    pub phi: Vec<f64>,
    /// Nonlinear part of d psi / dt on the grid nodes.
    pub psi: Vec<f64>,
    /// max over the four series of |n_max term| / |series total| in L^2;
    /// above ~1e-3 the truncation order is too low for the amplitude.
    pub last_term_ratio: f64,
}

impl SeriesRhs {
    pub fn truncation_warning(&self) -> bool {
        self.last_term_ratio > 1e-3
    }
}

fn signed_index(k: usize, n_pts: usize) -> i64 {
    if k <= n_pts / 2 {
        k as i64
    } else {
        k as i64 - n_pts as i64
    }
}

/// Modes that participate in the multilinear sums: nonzero, non-Nyquist,
/// above 1e-13 of the spectral peak.
fn active_modes(hat: &[Complex64], n_pts: usize) -> Vec<(i64, Complex64)> {
    let peak = hat.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let thresh = 1e-13 * peak;
    (0..n_pts)
        .filter(|&k| k != 0 && k != n_pts / 2)
        .map(|k| (signed_index(k, n_pts), hat[k]))
        .filter(|(_, c)| c.norm() > thresh)
        .collect()
}

fn l2(hat: &[Complex64]) -> f64 {
    hat.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Degree-(2n+1) self term of one field, as spectral data before the
/// outer d/dx: sum over mode tuples of T_n(eta) a_{k_1} ... a_{k_{2n+1}}
/// placed at the sum mode.
fn self_term_hat(
    alpha: f64,
    n: usize,
    dxi: f64,
    active: &[(i64, Complex64)],
    n_pts: usize,
    memo: &mut HashMap<Vec<u64>, f64>,
) -> Result<Vec<Complex64>> {
    let width = 2 * n + 1;
    let mut acc = vec![Complex64::new(0.0, 0.0); n_pts];
    if active.is_empty() {
        return Ok(acc);
    }
    if (active.len() as f64).powi(width as i32) > 2e6 {
        return Err(Error::domain(format!(
            "the multilinear evaluation needs a sparse spectrum; \
             {} active modes at degree {width} is too many",
            active.len()
        )));
    }
    let max_mode = (n_pts / 2 - 1) as i64;
    let mut idx = vec![0usize; width];
    let mut etas = vec![0.0f64; width];
    loop {
        let mut k_tot = 0i64;
        let mut coeff = Complex64::new(1.0, 0.0);
        for (slot, &i) in idx.iter().enumerate() {
            let (k, a) = active[i];
            k_tot += k;
            coeff *= a;
            etas[slot] = dxi * k as f64;
        }
        // modes beyond the grid are dropped: the oracle is exact on the
        // resolvable band provided the caller picks N large enough
        if k_tot.abs() <= max_mode {
            let mut key_f = etas.clone();
            key_f.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let key: Vec<u64> = key_f.iter().map(|e| e.to_bits()).collect();
            let t = match memo.get(&key) {
                Some(&t) => t,
                None => {
                    let t = kernel_tn(alpha, n, &key_f)?;
                    memo.insert(key, t);
                    t
                }
            };
            if t != 0.0 {
                let slot = if k_tot >= 0 {
                    k_tot as usize
                } else {
                    (n_pts as i64 + k_tot) as usize
                };
                acc[slot] += t * coeff;
            }
        }
        // odometer over the tuple space
        let mut carry = 0;
        while carry < width {
            idx[carry] += 1;
            if idx[carry] < active.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
        if carry == width {
            break;
        }
    }
    Ok(acc)
}

/// Applies the gap multiplier |xi|^nu K_nu(2h|xi|) in place
/// (zero-mode value Gamma(nu) h^{-nu} / 2).
fn gap_multiplier_hat(
    grid: &SpectralGrid,
    h: f64,
    nu: f64,
    hat: &mut [Complex64],
) -> Result<()> {
    let at_zero = 0.5 * gamma_fn(nu)? * h.powf(-nu);
    for (c, &xi) in hat.iter_mut().zip(grid.xi()) {
        if xi == 0.0 {
            *c *= at_zero;
        } else {
            let ax = xi.abs();
            *c *= ax.powf(nu) * bessel_k(nu, 2.0 * h * ax)?;
        }
    }
    Ok(())
}

/// Evaluates the truncated expansion of the nonlinear terms on the state.
///
/// The returned arrays are the nonlinear contributions to d/dt(phi, psi)
/// in the same frame as the solver's evolution (the linear terms are the
/// multiplier table's business and are not included). The self terms are
/// assembled multilinearly over the active spectrum, so the state must be
/// spectrally sparse; products must fit the grid band for the result to
/// be alias-free.
pub fn series_nonlinearity(
    params: &PhysicalParams,
    state: &FrontState,
    n_max: usize,
) -> Result<SeriesRhs> {
    let grid = &*state.grid;
    let n_pts = grid.n_points();
    let tables = ExpansionTables::new(params, n_max)?;
    let pref = if params.alpha == 2.0 { 1.0 / (2.0 * PI) } else { 1.0 };
    let dxi = 2.0 * PI / grid.length();
    let (tp, tm) = (params.theta_plus, params.theta_minus);

    let hat_phi = grid.forward(&state.phi);
    let hat_psi = grid.forward(&state.psi);
    let act_phi = active_modes(&hat_phi, n_pts);
    let act_psi = active_modes(&hat_psi, n_pts);

    let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut ratio: f64 = 0.0;

    // Self terms, per field.
    let mut self_phi = vec![Complex64::new(0.0, 0.0); n_pts];
    let mut self_psi = self_phi.clone();
    for (act, out) in [(&act_phi, &mut self_phi), (&act_psi, &mut self_psi)] {
        let mut terms: Vec<Vec<Complex64>> = Vec::new();
        for n in 1..=n_max {
            let mut t = self_term_hat(params.alpha, n, dxi, act, n_pts, &mut memo)?;
            let w = tables.self_weight(n);
            for c in &mut t {
                *c *= w;
            }
            terms.push(t);
        }
        for t in &terms {
            for (o, c) in out.iter_mut().zip(t) {
                *o += c;
            }
        }
        let total = l2(out);
        if total > 0.0 {
            ratio = ratio.max(l2(&terms[n_max - 1]) / total);
        }
    }

    // Cross terms. Pointwise powers of the fields are cached, and the
    // gap-multiplier transforms of (other field)^m are hoisted per n.
    let max_pow = 2 * n_max + 1;
    let mut pow_phi: Vec<Vec<f64>> = vec![vec![1.0; n_pts]];
    let mut pow_psi: Vec<Vec<f64>> = vec![vec![1.0; n_pts]];
    for p in 1..=max_pow {
        let prev_phi = &pow_phi[p - 1];
        let prev_psi = &pow_psi[p - 1];
        pow_phi.push(
            prev_phi
                .iter()
                .zip(&state.phi)
                .map(|(a, b)| a * b)
                .collect(),
        );
        pow_psi.push(
            prev_psi
                .iter()
                .zip(&state.psi)
                .map(|(a, b)| a * b)
                .collect(),
        );
    }

    let mut cross_phi = vec![Complex64::new(0.0, 0.0); n_pts];
    let mut cross_psi = cross_phi.clone();
    for (d_table, own_pow, other_pow, out) in [
        (&tables.d_upper, &pow_phi, &pow_psi, &mut cross_phi),
        (&tables.d_lower, &pow_psi, &pow_phi, &mut cross_psi),
    ] {
        let mut terms: Vec<Vec<Complex64>> = Vec::new();
        for n in 1..=n_max {
            let nu = n as f64 + 0.5 * (1.0 - params.alpha);
            let mut carried: Vec<Vec<f64>> = Vec::with_capacity(2 * n + 1);
            for m in 1..=(2 * n + 1) {
                let mut hat = grid.forward(&other_pow[m]);
                gap_multiplier_hat(grid, params.h, nu, &mut hat)?;
                carried.push(grid.inverse(&hat));
            }
            let mut term = vec![Complex64::new(0.0, 0.0); n_pts];
            for l in 0..=n {
                let top = 2 * n - l + 1;
                let d0 = d_table[n - 1][l][0];
                let hat0 = grid.forward(&own_pow[top]);
                for (t, c) in term.iter_mut().zip(&hat0) {
                    *t += d0 * c;
                }
                for m in 1..=top {
                    let dm = d_table[n - 1][l][m];
                    let prod: Vec<f64> = own_pow[top - m]
                        .iter()
                        .zip(&carried[m - 1])
                        .map(|(a, b)| a * b)
                        .collect();
                    let hatm = grid.forward(&prod);
                    for (t, c) in term.iter_mut().zip(&hatm) {
                        *t += dm * c;
                    }
                }
            }
            terms.push(term);
        }
        for t in &terms {
            for (o, c) in out.iter_mut().zip(t) {
                *o += c;
            }
        }
        let total = l2(out);
        if total > 0.0 {
            ratio = ratio.max(l2(&terms[n_max - 1]) / total);
        }
    }

    // d/dt phi = pref (Theta+ S[phi] - Theta- C_1[phi, psi]),
    // d/dt psi = pref (Theta- S[psi] - Theta+ C_2[psi, phi]).
    let mut rhs_phi_hat = vec![Complex64::new(0.0, 0.0); n_pts];
    let mut rhs_psi_hat = rhs_phi_hat.clone();
    for k in 0..n_pts {
        rhs_phi_hat[k] = pref * (tp * self_phi[k] - tm * cross_phi[k]);
        rhs_psi_hat[k] = pref * (tm * self_psi[k] - tp * cross_psi[k]);
    }
    grid.derivative_hat(&mut rhs_phi_hat);
    grid.derivative_hat(&mut rhs_psi_hat);
    Ok(SeriesRhs {
        phi: grid.inverse(&rhs_phi_hat),
        psi: grid.inverse(&rhs_psi_hat),
        last_term_ratio: ratio,
    })
}
