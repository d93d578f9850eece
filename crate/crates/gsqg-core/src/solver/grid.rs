//! Periodic pseudo-spectral grid and the two-front state living on it.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid of a power-of-two size with cached transform
/// plans. Spectral coefficients use the convention a_k = X_k / N, so
/// f(x_j) = sum_k a_k e^{i xi_k x_j} exactly.
pub struct SpectralGrid {
    n: usize,
    length: f64,
    x: Vec<f64>,
    xi: Vec<f64>,
    xi_mult: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl SpectralGrid {
    /// `n_points` must be a power of two >= 4; `length` is the period L.
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 4 || !n_points.is_power_of_two() {
            return Err(Error::domain(format!(
                "n_points must be a power of two >= 4, got {n_points}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let n = n_points;
        let dxi = 2.0 * std::f64::consts::PI / length;
        let x = (0..n).map(|j| length * j as f64 / n as f64).collect();
        // FFT slot ordering: k for k < N/2, k - N for k >= N/2. The
        // Nyquist slot k = N/2 is unpaired; odd multipliers (derivatives,
        // the linear coefficient matrices) act as 0 on it to preserve
        // reality, so `xi_mult` zeroes that slot.
        let signed = |k: usize| {
            if k <= n / 2 {
                k as isize
            } else {
                k as isize - n as isize
            }
        };
        let xi: Vec<f64> = (0..n)
            .map(|k| {
                let s = if k == n / 2 {
                    -(n as isize) / 2
                } else {
                    signed(k)
                };
                dxi * s as f64
            })
            .collect();
        let mut xi_mult = xi.clone();
        xi_mult[n / 2] = 0.0;
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            length,
            x,
            xi,
            xi_mult,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Node positions j L / N.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Signed wavenumbers 2 pi k / L in FFT slot order (Nyquist negative).
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Wavenumbers for odd multipliers: as [`Self::xi`] but with the
    /// Nyquist slot zeroed.
    pub fn xi_multiplier(&self) -> &[f64] {
        &self.xi_mult
    }

    /// Spectral coefficients a_k of real samples.
    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        assert_eq!(samples.len(), self.n);
        let mut buf: Vec<Complex64> =
            samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        self.fwd.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        buf
    }

    /// Real samples of the coefficient array (imaginary residue of the
    /// synthesis is discarded; it is O(eps) for Hermitian input).
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        assert_eq!(coeffs.len(), self.n);
        let mut buf = coeffs.to_vec();
        self.inv.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// In-place multiplication by i xi (the x-derivative).
    pub fn derivative_hat(&self, coeffs: &mut [Complex64]) {
        assert_eq!(coeffs.len(), self.n);
        for (c, &xi) in coeffs.iter_mut().zip(&self.xi_mult) {
            *c *= Complex64::new(0.0, xi);
        }
    }

    /// In-place multiplication by a real even multiplier m(|xi|); the
    /// zero mode is assigned `at_zero` (many of the multipliers here are
    /// singular or need their analytic limit at xi = 0).
    pub fn real_multiplier_hat<F: Fn(f64) -> f64>(
        &self,
        coeffs: &mut [Complex64],
        m: F,
        at_zero: f64,
    ) {
        assert_eq!(coeffs.len(), self.n);
        for (c, &xi) in coeffs.iter_mut().zip(&self.xi) {
            *c *= if xi == 0.0 { at_zero } else { m(xi.abs()) };
        }
    }

    /// Zeroes all modes with |k| > N/3 (2/3 dealiasing for the
    /// quadratically dominated nonlinear products).
    pub fn dealias_hat(&self, coeffs: &mut [Complex64]) {
        assert_eq!(coeffs.len(), self.n);
        let keep = self.n / 3;
        for (k, c) in coeffs.iter_mut().enumerate() {
            let idx = if k <= self.n / 2 { k } else { self.n - k };
            if idx > keep {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Samples the trigonometric interpolant at x_j + shift for every
    /// node: inverse transform of a_k e^{i xi_k shift}.
    pub fn sample_shifted(&self, coeffs: &[Complex64], shift: f64) -> Vec<f64> {
        let shifted: Vec<Complex64> = coeffs
            .iter()
            .zip(&self.xi)
            .map(|(&c, &xi)| c * Complex64::new(0.0, xi * shift).exp())
            .collect();
        self.inverse(&shifted)
    }
}

/// Perturbations of the two fronts at one instant. `phi` rides on the
/// upper front y = h + phi, `psi` on the lower front y = -h + psi.
#[derive(Debug, Clone)]
pub struct FrontState {
    pub grid: Arc<SpectralGrid>,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub time: f64,
}

/// Shape of the cosine initial-condition preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosineMode {
    /// phi = eps cos(k x), psi = 0.
    PhiOnly,
    /// phi = eps cos(k x), psi = -phi (equal-jump invariant manifold).
    Symmetric,
    /// phi = eps cos(k x), psi(x) = -phi(-x) (opposite-jump manifold).
    Antisymmetric,
}

impl FrontState {
    pub fn new(grid: Arc<SpectralGrid>, phi: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if phi.len() != grid.n_points() || psi.len() != grid.n_points() {
            return Err(Error::domain(format!(
                "state arrays must match the grid size {}, got {} and {}",
                grid.n_points(),
                phi.len(),
                psi.len()
            )));
        }
        if !phi.iter().chain(psi.iter()).all(|v| v.is_finite()) {
            return Err(Error::domain("state arrays must be finite"));
        }
        Ok(Self {
            grid,
            phi,
            psi,
            time: 0.0,
        })
    }

    /// Flat fronts phi = psi = 0.
    pub fn flat(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.n_points();
        Self {
            grid,
            phi: vec![0.0; n],
            psi: vec![0.0; n],
            time: 0.0,
        }
    }

    /// Single-mode cosine of integer wavenumber index `k` (wavenumber
    /// 2 pi k / L) and amplitude `eps`.
    pub fn cosine(grid: Arc<SpectralGrid>, k: usize, eps: f64, mode: CosineMode) -> Result<Self> {
        if k == 0 || k >= grid.n_points() / 2 {
            return Err(Error::domain(format!(
                "cosine index must satisfy 1 <= k < N/2, got {k}"
            )));
        }
        if !eps.is_finite() {
            return Err(Error::domain(format!("amplitude must be finite, got {eps}")));
        }
        let kx = 2.0 * std::f64::consts::PI * k as f64 / grid.length();
        let phi: Vec<f64> = grid.x().iter().map(|&x| eps * (kx * x).cos()).collect();
        let psi = match mode {
            CosineMode::PhiOnly => vec![0.0; phi.len()],
            CosineMode::Symmetric => phi.iter().map(|&p| -p).collect(),
            // cos is even, so -phi(-x) = -phi(x) on this preset; kept as
            // a distinct variant because the evolutions then differ.
            CosineMode::Antisymmetric => phi.iter().map(|&p| -p).collect(),
        };
        Self::new(grid, phi, psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn round_trip_and_coefficients() {
        let g = SpectralGrid::new(16, 2.0 * std::f64::consts::PI).unwrap();
        let f: Vec<f64> = g
            .x()
            .iter()
            .map(|&x| 1.5 + (x).cos() + 0.25 * (3.0 * x).sin())
            .collect();
        let hat = g.forward(&f);
        // a_0 = mean, a_{+-1} = 1/2, a_{+-3} = -+ i/4.
        assert_relative_eq!(hat[0].re, 1.5, epsilon = 1e-14);
        assert_relative_eq!(hat[1].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(hat[15].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(hat[3].im, -0.125, epsilon = 1e-14);
        assert_relative_eq!(hat[13].im, 0.125, epsilon = 1e-14);
        let back = g.inverse(&hat);
        for (a, b) in f.iter().zip(&back) {
            assert_relative_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn derivative_of_trig_is_exact() {
        let g = SpectralGrid::new(32, 4.0).unwrap();
        let k = 2.0 * std::f64::consts::PI * 3.0 / 4.0;
        let f: Vec<f64> = g.x().iter().map(|&x| (k * x).sin()).collect();
        let mut hat = g.forward(&f);
        g.derivative_hat(&mut hat);
        let df = g.inverse(&hat);
        for (j, &x) in g.x().iter().enumerate() {
            assert_relative_eq!(df[j], k * (k * x).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn shifted_sampling_matches_interpolant() {
        let g = SpectralGrid::new(64, 1.0).unwrap();
        let k = 2.0 * std::f64::consts::PI * 5.0;
        let f: Vec<f64> = g.x().iter().map(|&x| (k * x).cos()).collect();
        let hat = g.forward(&f);
        let s = 0.01234;
        let shifted = g.sample_shifted(&hat, s);
        for (j, &x) in g.x().iter().enumerate() {
            assert_relative_eq!(shifted[j], (k * (x + s)).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn nyquist_multiplier_slot_is_zeroed() {
        let g = SpectralGrid::new(8, 2.0).unwrap();
        assert_eq!(g.xi_multiplier()[4], 0.0);
        assert!(g.xi()[4] < 0.0);
        // Derivative of the pure Nyquist mode is the symmetric choice 0.
        let f: Vec<f64> = (0..8).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut hat = g.forward(&f);
        g.derivative_hat(&mut hat);
        for v in g.inverse(&hat) {
            assert!(v.abs() < 1e-13);
        }
    }

    #[test]
    fn dealias_zeroes_upper_third() {
        let g = SpectralGrid::new(24usize.next_power_of_two(), 1.0).unwrap(); // 32
        let mut hat = vec![Complex64::new(1.0, 0.0); 32];
        g.dealias_hat(&mut hat);
        for (k, c) in hat.iter().enumerate() {
            let idx = if k <= 16 { k } else { 32 - k };
            if idx > 10 {
                assert_eq!(c.norm(), 0.0);
            } else {
                assert_eq!(c.norm(), 1.0);
            }
        }
    }

    #[test]
    fn grid_and_state_validation() {
        assert!(SpectralGrid::new(12, 1.0).is_err());
        assert!(SpectralGrid::new(16, -1.0).is_err());
        let g = Arc::new(SpectralGrid::new(16, 1.0).unwrap());
        assert!(FrontState::new(g.clone(), vec![0.0; 8], vec![0.0; 16]).is_err());
        assert!(FrontState::new(g.clone(), vec![f64::NAN; 16], vec![0.0; 16]).is_err());
        assert!(FrontState::cosine(g.clone(), 0, 0.1, CosineMode::PhiOnly).is_err());
        assert!(FrontState::cosine(g.clone(), 8, 0.1, CosineMode::PhiOnly).is_err());
        let s = FrontState::cosine(g, 2, 0.1, CosineMode::Symmetric).unwrap();
        for (p, q) in s.phi.iter().zip(&s.psi) {
            assert_eq!(*p, -*q);
        }
    }
}
