use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use sharpslit_core::concentration::lp_lambda0;
use sharpslit_core::diffraction::{
    gamma_trace, normalize_frame, synthesize_frame, DetectorSpec, NoiseSpec,
};
use sharpslit_core::quantum::{min_uncertainty_coefficients, momentum_moments};
use sharpslit_core::special::{sine_integral, LanczosState};
use sharpslit_core::{SlitGeometry, UnitsConvention};

fn special_functions(c: &mut Criterion) {
    let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.05).collect();
    c.bench_function("sine_integral x1000", |b| {
        b.iter(|| xs.iter().map(|&x| sine_integral(black_box(x))).sum::<f64>())
    });
    let state = LanczosState::new(477e-6).unwrap();
    c.bench_function("lanczos momentum density x1000", |b| {
        b.iter(|| {
            xs.iter()
                .map(|&x| state.momentum_density(black_box(x * 1e3)))
                .sum::<f64>()
        })
    });
}

fn moments(c: &mut Criterion) {
    let units = UnitsConvention::natural();
    let state = min_uncertainty_coefficients(10_000, 477e-6).unwrap();
    c.bench_function("momentum moments n_max=1e4", |b| {
        b.iter(|| momentum_moments(black_box(&state), &units).unwrap())
    });
}

fn concentration(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp_lambda0");
    group.sample_size(10);
    for n in [100, 400] {
        group.bench_function(format!("grid {n}"), |b| {
            b.iter(|| lp_lambda0(black_box(1.0), n).unwrap())
        });
    }
    group.finish();
}

fn diffraction(c: &mut Criterion) {
    let geometry = SlitGeometry::lab();
    let detector = DetectorSpec::lab();
    let frame =
        normalize_frame(&synthesize_frame(&geometry, &detector, &NoiseSpec::noiseless()).unwrap())
            .unwrap();
    c.bench_function("gamma_trace 3648 px", |b| {
        b.iter(|| gamma_trace(black_box(&frame), &geometry).unwrap())
    });
    c.bench_function("synthesize_frame 3648 px", |b| {
        b.iter(|| {
            synthesize_frame(&geometry, &detector, black_box(&NoiseSpec::noiseless())).unwrap()
        })
    });
}

criterion_group!(
    benches,
    special_functions,
    moments,
    concentration,
    diffraction
);
criterion_main!(benches);
