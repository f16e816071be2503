//! Independent oracles and frozen reference values shared by the integration
//! tests. Nothing here calls into the library's quadrature or special
//! functions.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Reference values from 30-digit arbitrary-precision quadrature.
pub mod reference {
    pub const SI_PI: f64 = 1.851_937_051_982_466_2;
    pub const SI_TWO_PI: f64 = 1.418_151_576_132_628_5;
    pub const GAMMA: f64 = 1.016_888_020_649_302_2;
    /// Lanczos momentum density at k = 0, divided by Δx.
    pub const LANCZOS_DENSITY_AT_ZERO_PER_DX: f64 = 0.122_518_042_259_121_48;
    /// Probability of the minimum-uncertainty state inside |k| ≤ 2π/Δx.
    pub const MIN_STATE_WINDOW_TWO_PI: f64 = 0.970_094_052_770_034_5;
    /// 1 − Σ_{|n|≤1000} |c_n|² for the unnormalized minimizer coefficients.
    pub const NORM_TAIL_1000: f64 = 3.372_311_116_948_518_5e-11;
    /// Noise-free γ-estimate integrated to the edge of the 3648 × 8 μm sensor
    /// (Δx = 477 μm, λ = 632.82 nm, f = 150 mm).
    pub const THEORY_AT_LAB_EDGE: f64 = 1.016_278_989_767_797;
    pub const THEORY_AT_0P2_MM: f64 = 0.881_967_913_722_335_6;
    pub const THEORY_AT_0P8_MM: f64 = 1.005_284_270_924_666;
    /// Pixel-sum estimator γ̂_{N/2} on the noiseless lab frame, evaluated
    /// with an independent Si implementation.
    pub const GAMMA_HAT_LAB_NOISELESS: f64 = 1.016_279_002_646_332_2;
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2) && n > 0);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Simpson with one Richardson step: error O(h⁶) for smooth integrands.
pub fn simpson_richardson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let coarse = simpson(&f, a, b, n);
    let fine = simpson(&f, a, b, 2 * n);
    fine + (fine - coarse) / 15.0
}

/// `Si(x)` by quadrature of `sin t / t`.
pub fn si_by_quadrature(x: f64) -> f64 {
    let n = ((x.abs() * 400.0).ceil() as usize).max(64) * 2;
    simpson_richardson(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, n)
}

/// `Σ_{n=from}^{∞} term(n)` for a term decaying at least like `n⁻²`, summed
/// directly to `upto` and completed by the integral remainder
/// `∫_{upto+1/2}^∞` using the supplied antiderivative tail.
pub fn series_tail(
    term: impl Fn(f64) -> f64,
    from: u64,
    upto: u64,
    remainder: impl Fn(f64) -> f64,
) -> f64 {
    let mut sum = 0.0;
    for n in (from..=upto).rev() {
        sum += term(n as f64);
    }
    sum + remainder(upto as f64 + 0.5)
}

/// Minimum-uncertainty coefficient written out independently.
pub fn c_min(n: f64) -> f64 {
    let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
    8f64.sqrt() / PI * sign / (1.0 - 4.0 * n * n)
}
