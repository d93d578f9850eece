//! Randomized invariants: identities the implementation must satisfy for
//! every admissible input, checked over generated parameter draws.

use std::sync::Arc;

use proptest::prelude::*;

use gsqg_core::expansion::kernel_tn;
use gsqg_core::params::PhysicalParams;
use gsqg_core::solver::{
    nonlinear_cross, nonlinear_self, FrontField, FrontState, QuadratureOptions, QuadratureScheme,
    SpectralGrid, TargetEquation,
};
use gsqg_core::special_fn::{bessel_k, gamma_fn};
use gsqg_core::stability::{discriminant, growth_rates};
use gsqg_core::symbols::symbol_b2;

const PI: f64 = std::f64::consts::PI;

/// alpha draws covering the power-law range, both closed-form kernels,
/// and the graded-quadrature branch below 1.
fn any_alpha() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(1.0),
        Just(2.0),
        0.3f64..0.95f64,
        1.05f64..1.95f64,
    ]
}

fn any_theta() -> impl Strategy<Value = f64> {
    (0.1f64..2.0f64, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

proptest! {
    /// Gamma functional equation and reflection formula.
    #[test]
    fn gamma_recurrence_and_reflection(z in 0.05f64..20.0) {
        let lhs = gamma_fn(z + 1.0).unwrap();
        let rhs = z * gamma_fn(z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        if z < 1.0 {
            let refl = gamma_fn(z).unwrap() * gamma_fn(1.0 - z).unwrap();
            let exact = PI / (PI * z).sin();
            prop_assert!((refl - exact).abs() <= 1e-11 * exact.abs());
        }
    }

    /// K_nu: order symmetry is exact, the three-term recurrence
    /// K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu holds, and the value
    /// strictly decreases in x.
    #[test]
    fn bessel_symmetry_recurrence_decrease(nu in 0.0f64..8.0, x in 1e-2f64..30.0) {
        prop_assert_eq!(bessel_k(-nu, x).unwrap(), bessel_k(nu, x).unwrap());
        let km = bessel_k(nu - 1.0, x).unwrap();
        let k0 = bessel_k(nu, x).unwrap();
        let kp = bessel_k(nu + 1.0, x).unwrap();
        prop_assert!(
            (kp - (km + 2.0 * nu / x * k0)).abs() <= 1e-10 * kp,
            "recurrence violated at nu = {nu}, x = {x}"
        );
        prop_assert!(bessel_k(nu, 1.1 * x).unwrap() < k0);
    }

    /// The cross-front coupling symbol is positive and strictly
    /// decreasing in |xi| for every (alpha, h).
    #[test]
    fn coupling_symbol_positive_decreasing(
        alpha in any_alpha(),
        h in 0.2f64..3.0,
        xi in 0.01f64..8.0,
        step in 1.05f64..3.0,
    ) {
        let p = PhysicalParams::new(alpha, 1.0, 1.0, h).unwrap();
        let b = symbol_b2(&p, xi).unwrap();
        let b2 = symbol_b2(&p, step * xi).unwrap();
        prop_assert!(b.is_finite() && b > 0.0);
        prop_assert!(b2 < b, "b2 not decreasing: {b} -> {b2} at xi = {xi}, alpha = {alpha}");
    }

    /// Mode-pair structure of the linearization: the two branches carry
    /// opposite real parts, instability happens exactly when the
    /// discriminant is positive, and negating xi conjugates the pair.
    #[test]
    fn growth_rate_pairing(
        alpha in any_alpha(),
        tp in any_theta(),
        tm in any_theta(),
        h in 0.2f64..3.0,
        xi in 0.01f64..20.0,
    ) {
        let p = PhysicalParams::new(alpha, tp, tm, h).unwrap();
        let (mp, mm) = growth_rates(&p, xi).unwrap();
        let scale = mp.norm().max(mm.norm()).max(1e-300);
        prop_assert!((mp.re + mm.re).abs() <= 1e-12 * scale);
        let disc = discriminant(&p, xi).unwrap();
        prop_assert_eq!(disc > 0.0, mp.re != 0.0 || mm.re != 0.0);

        let (np, nm) = growth_rates(&p, -xi).unwrap();
        let tol = 1e-9 * scale;
        let direct = (np - mp.conj()).norm() <= tol && (nm - mm.conj()).norm() <= tol;
        let swapped = (np - mm.conj()).norm() <= tol && (nm - mp.conj()).norm() <= tol;
        prop_assert!(direct || swapped, "pair at -xi is not the conjugate pair");
    }

    /// Dimensional scaling: growth magnitudes at (xi/s, s h) are
    /// s^(alpha-2) times those at (xi, h); the dispersion curve is one
    /// shape in h|xi|.
    #[test]
    fn growth_rate_scaling(
        alpha in any_alpha(),
        tp in any_theta(),
        tm in any_theta(),
        h in 0.2f64..2.0,
        xi in 0.05f64..10.0,
        s in 0.4f64..2.5,
    ) {
        let p1 = PhysicalParams::new(alpha, tp, tm, h).unwrap();
        let p2 = PhysicalParams::new(alpha, tp, tm, s * h).unwrap();
        let (a1, _) = growth_rates(&p1, xi).unwrap();
        let (a2, _) = growth_rates(&p2, xi / s).unwrap();
        let factor = s.powf(alpha - 2.0);
        let want = factor * a1.re.abs();
        let got = a2.re.abs();
        prop_assert!(
            (got - want).abs() <= 1e-9 * want.max(factor * a1.norm()),
            "scaling violated: |Re| {got} vs {want} (s = {s}, alpha = {alpha})"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The odd multilinear kernel is even under eta -> -eta (the zeta
    /// sign flip absorbs the integrand's).
    #[test]
    fn multilinear_kernel_even(
        alpha in prop_oneof![Just(1.0), Just(2.0), 0.55f64..1.95],
        e1 in 0.05f64..3.0,
        e2 in 0.05f64..3.0,
        e3 in 0.05f64..3.0,
        s1 in any::<bool>(),
        s2 in any::<bool>(),
    ) {
        let etas = [
            if s1 { -e1 } else { e1 },
            if s2 { -e2 } else { e2 },
            e3,
        ];
        let neg: Vec<f64> = etas.iter().map(|e| -e).collect();
        let t = kernel_tn(alpha, 1, &etas).unwrap();
        let tn = kernel_tn(alpha, 1, &neg).unwrap();
        prop_assert!(
            (t - tn).abs() <= 1e-8 * (1.0 + t.abs()),
            "T_1({etas:?}) = {t} differs from T_1(-eta) = {tn}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Each equation's quadrature nonlinearity has (spectrally) zero
    /// mean: the fronts' individual means are invariant under the full
    /// nonlinear flow.
    #[test]
    fn nonlinear_rhs_has_zero_mean(
        alpha in any_alpha(),
        tp in any_theta(),
        tm in any_theta(),
        h in 0.3f64..2.0,
        eps in 2e-4f64..1e-3,
        coefs in proptest::array::uniform8(-1.0f64..1.0),
    ) {
        let n = 32usize;
        let grid = Arc::new(SpectralGrid::new(n, 2.0 * PI).unwrap());
        let p = PhysicalParams::new(alpha, tp, tm, h).unwrap();
        let scheme = QuadratureScheme::new(&p, &grid, &QuadratureOptions::default()).unwrap();
        let field = |c: &[f64]| -> Vec<f64> {
            grid.x()
                .iter()
                .map(|&x| {
                    eps * (c[0] * x.cos()
                        + c[1] * x.sin()
                        + c[2] * (2.0 * x).cos()
                        + c[3] * (3.0 * x).sin())
                })
                .collect()
        };
        let state =
            FrontState::new(grid.clone(), field(&coefs[..4]), field(&coefs[4..])).unwrap();

        for q in [
            nonlinear_self(&p, &state, FrontField::Phi, &scheme).unwrap(),
            nonlinear_self(&p, &state, FrontField::Psi, &scheme).unwrap(),
            nonlinear_cross(&p, &state, TargetEquation::PhiEquation, &scheme).unwrap(),
            nonlinear_cross(&p, &state, TargetEquation::PsiEquation, &scheme).unwrap(),
        ] {
            prop_assert!(q.iter().all(|v| v.is_finite()));
            let mean = q.iter().sum::<f64>() / n as f64;
            let linf = q.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            prop_assert!(
                mean.abs() <= 1e-10 * linf + 1e-18,
                "mean {mean:e} vs amplitude {linf:e} (alpha = {alpha})"
            );
        }
    }
}
