//! Linearized stability of the flat two-front state: discriminant,
//! growth rates mu(xi), marginal-wavenumber and peak-growth searches.
//!
//! The characteristic roots of the per-mode matrix A(xi) are
//!
//!   mu_pm(xi) = (1/2) { -i xi b1(xi) (Theta+ + Theta-) +- sqrt(Delta(xi)) },
//!   Delta(xi) = -[ |xi| b1(xi) (Theta+ - Theta-) + 2 v |xi| ]^2
//!               - 4 Theta+ Theta- xi^2 b2^2(xi),
//!
//! expressed in the stability frame of [`crate::symbols`] (at alpha = 2
//! the effective pointwise b1 = 1/(2|xi|) is used, which reproduces the
//! explicit Euler operators). When Theta+ Theta- > 0 both terms of Delta
//! are non-positive, so Delta <= 0 holds exactly in floating point and
//! the computed Re mu is exactly zero: flows with same-sign jumps are
//! spectrally stable. Opposite-sign jumps are unstable in a band
//! 0 < h|xi| < marginal, and Delta's sign depends on h|xi| alone, so
//! searches are parameterized by the dimensionless h|xi|.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::galilean_constants;
use crate::params::PhysicalParams;
use crate::symbols::{symbol_b1_effective, symbol_b2};

/// Discriminant Delta(xi) of the characteristic polynomial; Delta > 0
/// means a growing and a decaying mode at this wavenumber.
pub fn discriminant(params: &PhysicalParams, xi: f64) -> Result<f64> {
    let b1 = symbol_b1_effective(params.alpha, xi)?;
    let b2 = symbol_b2(params, xi)?;
    let v = galilean_constants(params)?.v;
    let (tp, tm) = (params.theta_plus, params.theta_minus);
    let bracket = xi.abs() * b1 * (tp - tm) + 2.0 * v * xi.abs();
    let cross = xi * b2;
    Ok(-(bracket * bracket + 4.0 * tp * tm * cross * cross))
}

/// The two characteristic roots (mu_plus, mu_minus), stability frame.
/// For Delta < 0 the branch sqrt(Delta) = i sqrt(|Delta|) is taken, so
/// Re mu_pm = 0 exactly on the stable branch.
pub fn growth_rates(params: &PhysicalParams, xi: f64) -> Result<(Complex64, Complex64)> {
    let delta = discriminant(params, xi)?;
    let b1 = symbol_b1_effective(params.alpha, xi)?;
    let t = Complex64::new(0.0, -xi * b1 * (params.theta_plus + params.theta_minus));
    let s = if delta >= 0.0 {
        Complex64::new(delta.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-delta).sqrt())
    };
    Ok((0.5 * (t + s), 0.5 * (t - s)))
}

fn delta_at_hxi(params: &PhysicalParams, hxi: f64) -> Result<f64> {
    discriminant(params, hxi / params.h)
}

/// Dimensionless h|xi| where Delta crosses zero, located inside `bracket`
/// by bisection with a final secant polish; |Delta| < 1e-12 at the result.
pub fn find_marginal_wavenumber(
    params: &PhysicalParams,
    bracket: (f64, f64),
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!(
            "bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let mut flo = delta_at_hxi(params, lo)?;
    let mut fhi = delta_at_hxi(params, hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at machine width
        }
        let fmid = delta_at_hxi(params, mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    // Secant polish inside the final bracket.
    let mut best = if flo.abs() <= fhi.abs() { lo } else { hi };
    if (fhi - flo).abs() > 0.0 {
        let sec = lo - flo * (hi - lo) / (fhi - flo);
        if sec > 0.0 && sec.is_finite() {
            let fsec = delta_at_hxi(params, sec)?;
            if fsec.abs() < flo.abs().min(fhi.abs()) {
                best = sec;
            }
        }
    }
    Ok(best)
}

/// (argmax h|xi|, max Re mu_plus) over `bracket`, located by coarse
/// sampling plus golden-section refinement to 1e-8 in the location.
pub fn find_peak_growth(params: &PhysicalParams, bracket: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain(format!(
            "bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let rate = |hxi: f64| -> Result<f64> {
        let d = delta_at_hxi(params, hxi)?;
        Ok(if d > 0.0 { 0.5 * d.sqrt() } else { 0.0 })
    };
    let n = 512;
    let (mut k_best, mut g_best) = (0usize, 0.0f64);
    for k in 0..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let g = rate(x)?;
        if g > g_best {
            (k_best, g_best) = (k, g);
        }
    }
    if g_best <= 0.0 {
        return Err(Error::NoInstability { lo, hi });
    }
    let mut a = lo + (hi - lo) * k_best.saturating_sub(1) as f64 / n as f64;
    let mut b = lo + (hi - lo) * (k_best + 1).min(n) as f64 / n as f64;
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (rate(c)?, rate(d)?);
    while b - a > 1e-8 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = rate(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = rate(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, rate(x)?))
}

/// Dispersion data over a wavenumber grid, with located marginal and
/// peak points when an instability band is present.
#[derive(Debug, Clone)]
pub struct DispersionResult {
    pub params: PhysicalParams,
    pub xi: Vec<f64>,
    pub mu_plus: Vec<Complex64>,
    pub mu_minus: Vec<Complex64>,
    pub delta: Vec<f64>,
    pub marginal_hxi: Option<f64>,
    pub peak_hxi: Option<f64>,
    pub peak_growth: Option<f64>,
}

/// Evaluates the dispersion relation over `hxi_grid` (dimensionless
/// h|xi|; defaults to 2048 log-spaced points in [1e-3, 10]). Modes are
/// evaluated in parallel; outputs are ordered like the grid.
pub fn scan(params: &PhysicalParams, hxi_grid: Option<&[f64]>) -> Result<DispersionResult> {
    let grid: Vec<f64> = match hxi_grid {
        Some(g) => g.to_vec(),
        None => {
            let n = 2048;
            (0..n)
                .map(|k| 10f64.powf(-3.0 + 4.0 * k as f64 / (n - 1) as f64))
                .collect()
        }
    };
    let xi: Vec<f64> = grid.iter().map(|&x| x / params.h).collect();
    let rows: Vec<(Complex64, Complex64, f64)> = xi
        .par_iter()
        .map(|&x| {
            let (mp, mm) = growth_rates(params, x)?;
            Ok((mp, mm, discriminant(params, x)?))
        })
        .collect::<Result<_>>()?;
    let mu_plus: Vec<_> = rows.iter().map(|r| r.0).collect();
    let mu_minus: Vec<_> = rows.iter().map(|r| r.1).collect();
    let delta: Vec<_> = rows.iter().map(|r| r.2).collect();

    let mut marginal_hxi = None;
    for w in 0..grid.len().saturating_sub(1) {
        if delta[w] > 0.0 && delta[w + 1] < 0.0 {
            marginal_hxi = find_marginal_wavenumber(params, (grid[w], grid[w + 1])).ok();
            break;
        }
    }
    let (mut peak_hxi, mut peak_growth) = (None, None);
    if delta.iter().any(|&d| d > 0.0) {
        if let Ok((x, g)) = find_peak_growth(params, (grid[0], *grid.last().unwrap())) {
            peak_hxi = Some(x);
            peak_growth = Some(g);
        }
    }
    Ok(DispersionResult {
        params: *params,
        xi,
        mu_plus,
        mu_minus,
        delta,
        marginal_hxi,
        peak_hxi,
        peak_growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::{bessel_k, EULER_MASCHERONI};
    use crate::symbols::{mode_matrix, SymbolFrame};
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(alpha: f64, tp: f64, tm: f64, h: f64) -> PhysicalParams {
        PhysicalParams::new(alpha, tp, tm, h).unwrap()
    }

    #[test]
    fn discriminant_closed_forms() {
        let pe = params(2.0, 1.0, -1.0, 1.0);
        for &xi in &[0.1f64, 0.3, 0.63923, 1.0, 2.5] {
            let expected = (-4.0 * xi).exp() - (1.0 - 2.0 * xi).powi(2);
            assert_relative_eq!(
                discriminant(&pe, xi).unwrap(),
                expected,
                epsilon = 1e-13,
                max_relative = 1e-12
            );
        }
        let ps = params(1.0, 1.0, -1.0, 1.0);
        for &xi in &[0.2f64, 0.51756, 0.71129, 1.5] {
            let k0 = bessel_k(0.0, 2.0 * xi).unwrap();
            let expected =
                16.0 * xi * xi * (k0 * k0 - (xi.ln() + EULER_MASCHERONI).powi(2));
            assert_relative_eq!(
                discriminant(&ps, xi).unwrap(),
                expected,
                epsilon = 1e-12,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn same_sign_jumps_are_exactly_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let alpha = [0.5, 1.0, 1.5, 2.0][rng.gen_range(0..4)];
            let mag_p = rng.gen_range(0.1..3.0);
            let mag_m = rng.gen_range(0.1..3.0);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let p = params(alpha, sign * mag_p, sign * mag_m, rng.gen_range(0.3..2.0));
            for _ in 0..20 {
                let xi = 10f64.powf(rng.gen_range(-2.0..1.3));
                assert!(discriminant(&p, xi).unwrap() <= 0.0);
                let (mp, mm) = growth_rates(&p, xi).unwrap();
                assert_eq!(mp.re, 0.0);
                assert_eq!(mm.re, 0.0);
            }
        }
    }

    #[test]
    fn rates_match_matrix_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let alpha = match rng.gen_range(0..4) {
                0 => rng.gen_range(0.15..0.95),
                1 => 1.0,
                2 => rng.gen_range(1.05..1.95),
                _ => 2.0,
            };
            let p = params(
                alpha,
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.3..2.0),
            );
            let xi = 10f64.powf(rng.gen_range(-2.0..1.3))
                * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let a = mode_matrix(&p, xi, SymbolFrame::Stability).unwrap();
            let tr = a[0][0] + a[1][1];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let s = (tr * tr - 4.0 * det).sqrt();
            let (e1, e2) = (0.5 * (tr + s), 0.5 * (tr - s));
            let (mp, mm) = growth_rates(&p, xi).unwrap();
            let direct = (mp - e1).norm() + (mm - e2).norm();
            let swapped = (mp - e2).norm() + (mm - e1).norm();
            let scale = 1.0 + mp.norm() + mm.norm();
            assert!(
                direct.min(swapped) < 1e-10 * scale,
                "eig mismatch at alpha={alpha} xi={xi}: {direct} {swapped}"
            );
        }
    }

    #[test]
    fn negative_xi_pairing() {
        let p = params(1.0, 1.0, -1.0, 1.0);
        for &xi in &[0.3f64, 0.51756, 2.0] {
            let (mp, mm) = growth_rates(&p, xi).unwrap();
            let (np, nm) = growth_rates(&p, -xi).unwrap();
            let delta = discriminant(&p, xi).unwrap();
            if delta <= 0.0 {
                // Stable branch: mu_pm(-xi) = conj(mu_mp(xi)).
                assert!((np - mm.conj()).norm() < 1e-14);
                assert!((nm - mp.conj()).norm() < 1e-14);
            } else {
                // Unstable branch: conjugation preserves the labels.
                assert!((np - mp.conj()).norm() < 1e-14);
                assert!((nm - mm.conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn marginal_wavenumbers() {
        let pe = params(2.0, 1.0, -1.0, 1.0);
        let m = find_marginal_wavenumber(&pe, (0.1, 2.0)).unwrap();
        assert!((m - 0.63923).abs() < 1e-4, "euler marginal {m}");
        assert!(delta_at_hxi(&pe, m).unwrap().abs() < 1e-12);

        let ps = params(1.0, 1.0, -1.0, 1.0);
        let m = find_marginal_wavenumber(&ps, (0.1, 2.0)).unwrap();
        assert!((m - 0.71129).abs() < 1e-4, "sqg marginal {m}");
        assert!(delta_at_hxi(&ps, m).unwrap().abs() < 1e-12);

        // The located h|xi| is invariant under rescaling h.
        for &alpha in &[2.0, 1.0, 1.3] {
            let a = find_marginal_wavenumber(&params(alpha, 1.0, -1.0, 1.0), (0.1, 2.0))
                .unwrap();
            let b = find_marginal_wavenumber(&params(alpha, 1.0, -1.0, 2.0), (0.1, 2.0))
                .unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }

        assert!(matches!(
            find_marginal_wavenumber(&pe, (2.0, 3.0)),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn peak_growth_location() {
        let ps = params(1.0, 1.0, -1.0, 1.0);
        let (x, g) = find_peak_growth(&ps, (0.05, 0.7)).unwrap();
        assert!((x - 0.51756).abs() < 1e-3, "sqg peak at {x}");
        assert!(g > 0.0);
        assert_relative_eq!(g, 0.5 * delta_at_hxi(&ps, x).unwrap().sqrt());

        assert!(matches!(
            find_peak_growth(&params(1.0, 1.0, 1.0, 1.0), (0.05, 0.7)),
            Err(Error::NoInstability { .. })
        ));
    }

    #[test]
    fn scan_locates_band_and_is_deterministic() {
        let ps = params(1.0, 1.0, -1.0, 1.0);
        let r1 = scan(&ps, None).unwrap();
        let r2 = scan(&ps, None).unwrap();
        assert_eq!(r1.xi.len(), 2048);
        assert_eq!(r1.delta, r2.delta);
        assert_eq!(r1.mu_plus, r2.mu_plus);
        assert!((r1.marginal_hxi.unwrap() - 0.71129).abs() < 1e-4);
        assert!((r1.peak_hxi.unwrap() - 0.51756).abs() < 1e-3);
        for &k in &[100usize, 1000, 2000] {
            assert_eq!(r1.delta[k], discriminant(&ps, r1.xi[k]).unwrap());
        }
        // Even symbol: negative wavenumbers carry the same discriminant.
        assert_eq!(
            discriminant(&ps, -r1.xi[700]).unwrap(),
            r1.delta[700]
        );
    }
}
