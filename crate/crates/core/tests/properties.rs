use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharpslit_core::concentration::{concentration_probability, lp_lambda0, DEFAULT_GRID_SIZE};
use sharpslit_core::density::SampledDensity;
use sharpslit_core::quantum::{
    min_uncertainty_coefficients, momentum_moments, perturbed_minimum_state, popoviciu_sigma_x,
    random_constrained_state, verify_constraints, FourierState,
};
use sharpslit_core::special::{eval_lanczos_momentum_density, sine_integral, LanczosState};
use sharpslit_core::{ProbabilityDensity, UnitsConvention};

const SEED: u64 = 0x5eed;

fn complex_vec(max_half: usize) -> impl Strategy<Value = Vec<Complex64>> {
    (1..=max_half).prop_flat_map(|half| {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 2 * half + 1)
            .prop_filter("nonzero", |v| {
                v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
            })
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    })
}

proptest! {
    #[test]
    fn parseval_after_construction(c in complex_vec(64), dx in 1e-6..10.0f64) {
        let state = FourierState::new(dx, c).unwrap();
        let total: f64 = state.coefficients().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_states_have_zero_mean(half in prop::collection::vec(-5.0..5.0f64, 2..40), dx in 1e-4..1.0f64) {
        prop_assume!(half.iter().any(|x| x.abs() > 1e-3));
        let m = half.len() as i64 - 1;
        let c = (-m..=m).map(|n| Complex64::new(half[n.unsigned_abs() as usize], 0.0)).collect();
        let state = FourierState::new(dx, c).unwrap();
        let moments = momentum_moments(&state, &UnitsConvention::natural()).unwrap();
        prop_assert!(moments.mean.abs() < 1e-12 * 2.0 * PI / dx);
    }

    #[test]
    fn spread_scales_inversely_with_width(c in complex_vec(16), dx in 1e-4..1.0f64, s in 0.01..100.0f64) {
        let u = UnitsConvention::natural();
        let a = momentum_moments(&FourierState::new(dx, c.clone()).unwrap(), &u).unwrap();
        let b = momentum_moments(&FourierState::new(s * dx, c).unwrap(), &u).unwrap();
        prop_assert!((b.sigma_p * s - a.sigma_p).abs() <= 1e-13 * a.sigma_p.max(1e-300));
        prop_assert!((b.sigma_p * s * dx - a.sigma_p * dx).abs() <= 1e-13 * (a.sigma_p * dx).max(1e-300));
    }

    #[test]
    fn sine_integral_is_odd(x in -1e4..1e4f64) {
        prop_assert_eq!(sine_integral(-x), -sine_integral(x));
    }

    #[test]
    fn lanczos_density_is_even(k in -1e6..1e6f64) {
        let state = LanczosState::new(477e-6).unwrap();
        prop_assert_eq!(eval_lanczos_momentum_density(k, &state), eval_lanczos_momentum_density(-k, &state));
    }
}

#[test]
fn constrained_states_never_beat_the_sharp_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let u = UnitsConvention::natural();
    let dx = 1.0;
    for i in 0..200 {
        let state = if i % 2 == 0 {
            random_constrained_state(&mut rng, 64, dx)
        } else {
            let eps = 10f64.powf(rng.random_range(-6.0..0.0));
            perturbed_minimum_state(&mut rng, 64, dx, eps)
        }
        .unwrap();
        assert!(verify_constraints(&state).boundary_residual < 1e-12);
        let product = momentum_moments(&state, &u).unwrap().sigma_p * dx;
        assert!(product >= PI * (1.0 - 1e-6), "{product}");
    }
}

#[test]
fn global_phase_keeps_the_minimum() {
    let u = UnitsConvention::natural();
    let base = min_uncertainty_coefficients(4096, 1.0).unwrap();
    let reference = momentum_moments(&base, &u).unwrap().sigma_p;
    for theta in [0.3, 1.7, PI] {
        let rotated: Vec<Complex64> = base
            .coefficients()
            .iter()
            .map(|c| c * Complex64::from_polar(1.0, theta))
            .collect();
        let s = momentum_moments(&FourierState::new(1.0, rotated).unwrap(), &u)
            .unwrap()
            .sigma_p;
        assert!((s / reference - 1.0).abs() < 1e-14);
    }
    assert!((reference / PI - 1.0).abs() < 1e-4);
}

#[test]
fn popoviciu_on_random_densities() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for _ in 0..200 {
        let dx: f64 = rng.random_range(1e-6..10.0);
        let count = rng.random_range(1..60);
        let mut points: Vec<f64> = (0..count)
            .map(|_| dx * (rng.random::<f64>() - 0.5))
            .collect();
        points.sort_by(f64::total_cmp);
        let masses: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 1e-12).collect();
        let density = SampledDensity::from_masses(points, masses)
            .unwrap()
            .normalized()
            .unwrap();
        let sigma = popoviciu_sigma_x(&density, dx).unwrap();
        assert!(sigma <= 0.5 * dx, "{sigma} > {}", 0.5 * dx);

        // A smooth density: random positive polynomial in x on the slit.
        let coeffs: Vec<f64> = (0..6).map(|_| rng.random::<f64>()).collect();
        let smooth = SampledDensity::from_fn(
            |x| {
                coeffs
                    .iter()
                    .rev()
                    .fold(0.0, |acc, c| acc * (2.0 * x / dx).abs() + c)
            },
            -0.5 * dx,
            0.5 * dx,
            4,
            8,
        )
        .unwrap()
        .normalized()
        .unwrap();
        assert!(popoviciu_sigma_x(&smooth, dx).unwrap() <= 0.5 * dx);
    }
}

#[test]
fn window_probability_respects_concentration_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let dx = 1.0;
    let windows: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    let bounds: Vec<f64> = windows
        .iter()
        .map(|&xi| lp_lambda0(xi, DEFAULT_GRID_SIZE).unwrap().lambda0)
        .collect();
    // ξ = Δx·Δk/(2π), so the wavenumber window is Δk = 2πξ/Δx.
    let check = |density: &dyn ProbabilityDensity| {
        for (&xi, &bound) in windows.iter().zip(&bounds) {
            let p = concentration_probability(density, 2.0 * PI * xi / dx).unwrap();
            assert!(p <= bound + 2e-3, "ξ = {xi}: {p} > {bound}");
        }
    };
    check(&LanczosState::new(dx).unwrap());
    check(&min_uncertainty_coefficients(1024, dx).unwrap());
    for _ in 0..48 {
        check(&random_constrained_state(&mut rng, 64, dx).unwrap());
    }
}
