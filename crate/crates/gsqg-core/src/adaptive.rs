//! Adaptive Simpson quadrature for smooth 1-D integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Integrates `f` over [a, b] to absolute tolerance `tol` by recursive
/// Simpson bisection (error estimate from the 15-point Richardson rule).
pub(crate) fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a).abs() < 1e-300 {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Convergence(format!(
            "adaptive Simpson hit max depth on [{a}, {b}]"
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?,
    )
}

/// Complex-valued counterpart of [`adaptive_simpson`]; the error metric
/// is the modulus of the Richardson defect.
pub(crate) fn adaptive_simpson_c64<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step_c64(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step_c64<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol || (b - a).abs() < 1e-300 {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Convergence(format!(
            "adaptive Simpson hit max depth on [{a}, {b}]"
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(
        simpson_step_c64(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
            + simpson_step_c64(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?,
    )
}
