//! States confined to a slit `[-Δx/2, Δx/2]`, expanded in the momentum
//! eigenbasis `φ_n(x) = e^{i k_n x}/√Δx`, `k_n = 2πn/Δx`.
//!
//! The minimum of σ_p under the boundary condition `ψ(±Δx/2) = 0` is attained
//! by `c_n ∝ (−1)ⁿ/(1 − 4n²)`, i.e. the half-period cosine, with σ_p·Δx = πħ.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::density::{ProbabilityDensity, SampledDensity, NORMALIZATION_TOL};
use crate::error::{require_positive, Error, Result};
use crate::quadrature::Integrator;
use crate::units::UnitsConvention;

/// Default truncation of the coefficient series.
pub const DEFAULT_N_MAX: usize = 4096;

/// Largest acceptable |Σ|c_n|² − 1| after construction.
pub const PARSEVAL_TOL: f64 = 1e-10;

/// Truncated expansion of a slit-confined state, indices `-n_max..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    slit_width: f64,
    n_max: usize,
    coefficients: Vec<Complex64>,
}

impl FourierState {
    /// Builds a state from `2·n_max + 1` coefficients ordered from `-n_max`
    /// upward, renormalizing them to unit norm.
    pub fn new(slit_width: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        let slit_width = require_positive("slit_width", slit_width)?;
        let len = coefficients.len();
        if len < 3 || len.is_multiple_of(2) {
            return Err(Error::invalid(
                "coefficients",
                format!("need an odd count >= 3 (n_max >= 1), got {len}"),
            ));
        }
        if coefficients
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::invalid("coefficients", "must be finite"));
        }
        let norm = coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            return Err(Error::invalid("coefficients", "all coefficients are zero"));
        }
        Ok(Self {
            slit_width,
            n_max: len / 2,
            coefficients: coefficients.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// A single momentum eigenstate `φ_n`.
    pub fn single_mode(slit_width: f64, n_max: usize, n: i64) -> Result<Self> {
        if n_max < 1 || n.unsigned_abs() as usize > n_max {
            return Err(Error::invalid(
                "n",
                format!("mode {n} outside 1 <= n_max = {n_max}"),
            ));
        }
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * n_max + 1];
        c[(n + n_max as i64) as usize] = Complex64::new(1.0, 0.0);
        Self::new(slit_width, c)
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Coefficients ordered from `-n_max` to `n_max`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `c_n`, zero outside the truncation.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let idx = n + self.n_max as i64;
        if idx < 0 || idx as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[idx as usize]
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        let m = self.n_max as i64;
        -m..=m
    }

    /// `k_n = 2πn/Δx`.
    pub fn wavenumber(&self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.slit_width
    }

    /// Momentum eigenvalue `p_n = ħ k_n`.
    pub fn momentum(&self, n: i64, units: &UnitsConvention) -> f64 {
        units.hbar() * self.wavenumber(n)
    }

    /// True when `c_n = c_{-n}` for every `n`.
    pub fn is_symmetric(&self) -> bool {
        (1..=self.n_max as i64).all(|n| self.coefficient(n) == self.coefficient(-n))
    }

    /// `ψ(x) = Σ c_n φ_n(x)` inside the slit, zero outside.
    pub fn position_amplitude(&self, x: f64) -> Complex64 {
        if x.abs() > 0.5 * self.slit_width {
            return Complex64::new(0.0, 0.0);
        }
        let sum: Complex64 = self
            .indices()
            .zip(&self.coefficients)
            .map(|(n, c)| c * Complex64::from_polar(1.0, self.wavenumber(n) * x))
            .sum();
        sum / self.slit_width.sqrt()
    }

    /// Unitary Fourier transform `ψ̃(k) = √(Δx/2π)·Σ c_n sinc((k − k_n)Δx/2)`.
    pub fn momentum_amplitude(&self, k: f64) -> Complex64 {
        let dx = self.slit_width;
        let sum: Complex64 = self
            .indices()
            .zip(&self.coefficients)
            .map(|(n, c)| c * crate::special::sinc(0.5 * (k - self.wavenumber(n)) * dx))
            .sum();
        sum * (dx / (2.0 * PI)).sqrt()
    }
}

impl ProbabilityDensity for FourierState {
    fn total_mass(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability for `k ∈ [lo, hi]` of the momentum density `|ψ̃(k)|²`.
    fn mass_in(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(hi >= lo) {
            return Err(Error::invalid("window", format!("[{lo}, {hi}]")));
        }
        let panel = PI / self.slit_width;
        Ok(Integrator::with_abs_tol(1e-12)
            .integrate_panels(|k| self.momentum_amplitude(k).norm_sqr(), lo, hi, panel)?
            .value)
    }
}

/// Unnormalized coefficient `(√8/π)·(−1)ⁿ/(1 − 4n²)` of the minimizer.
pub fn min_uncertainty_coefficient(n: i64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let nf = n as f64;
    8f64.sqrt() / PI * sign / (1.0 - 4.0 * nf * nf)
}

/// The minimum-uncertainty state truncated at `n_max` and renormalized.
pub fn min_uncertainty_coefficients(n_max: usize, delta_x: f64) -> Result<FourierState> {
    if n_max < 1 {
        return Err(Error::invalid("n_max", "must be >= 1"));
    }
    let m = n_max as i64;
    let c = (-m..=m)
        .map(|n| Complex64::new(min_uncertainty_coefficient(n), 0.0))
        .collect();
    FourierState::new(delta_x, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumMoments {
    pub mean: f64,
    pub sigma_p: f64,
}

fn check_parseval(state: &FourierState) -> Result<()> {
    let total = state.total_mass();
    if (total - 1.0).abs() > PARSEVAL_TOL {
        return Err(Error::invalid("state", format!("norm² = {total}, not 1")));
    }
    Ok(())
}

/// Mean and standard deviation of momentum from the point spectrum.
///
/// `±n` pairs are combined before summation so symmetric states give a mean
/// of exactly zero.
pub fn momentum_moments(state: &FourierState, units: &UnitsConvention) -> Result<MomentumMoments> {
    check_parseval(state)?;
    let mut first = 0.0;
    let mut second = 0.0;
    for n in (1..=state.n_max as i64).rev() {
        let plus = state.coefficient(n).norm_sqr();
        let minus = state.coefficient(-n).norm_sqr();
        let nf = n as f64;
        first += nf * (plus - minus);
        second += nf * nf * (plus + minus);
    }
    let unit = 2.0 * PI * units.hbar() / state.slit_width;
    let variance = (second - first * first).max(0.0);
    Ok(MomentumMoments {
        mean: unit * first,
        sigma_p: unit * variance.sqrt(),
    })
}

/// `√(2/Δx)·cos(πx/Δx)`, defined on the closed slit.
pub fn eval_position_wavefunction(x: f64, delta_x: f64) -> Result<f64> {
    let dx = require_positive("delta_x", delta_x)?;
    if !(x.abs() <= 0.5 * dx) {
        return Err(Error::Domain {
            value: x,
            domain: format!("[-{h}, {h}]", h = 0.5 * dx),
        });
    }
    Ok((2.0 / dx).sqrt() * (PI * x / dx).cos())
}

/// `2√(πΔx)·cos(Δx·k/2)/(π² − Δx²k²)`, with the removable singularity at
/// `|Δx·k| = π` evaluated by its Taylor expansion.
pub fn eval_momentum_wavefunction(k: f64, delta_x: f64) -> f64 {
    let u = (delta_x * k).abs();
    let t = u - PI;
    let prefactor = 2.0 * (PI * delta_x).sqrt();
    if t.abs() < 1e-4 {
        let t2 = t * t;
        prefactor * (0.5 - t2 / 48.0 + t2 * t2 / 3840.0) / (2.0 * PI + t)
    } else {
        prefactor * (0.5 * u).cos() / (PI * PI - u * u)
    }
}

/// Residuals of the two constraints of the variational problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResiduals {
    /// |Σ|c_n|² − 1|
    pub norm_residual: f64,
    /// |Σ(−1)ⁿ c_n*|, proportional to |ψ(Δx/2)|.
    pub boundary_residual: f64,
}

pub fn verify_constraints(state: &FourierState) -> ConstraintResiduals {
    let boundary: Complex64 = state
        .indices()
        .zip(state.coefficients())
        .map(|(n, c)| if n % 2 == 0 { c.conj() } else { -c.conj() })
        .sum();
    ConstraintResiduals {
        norm_residual: (state.total_mass() - 1.0).abs(),
        boundary_residual: boundary.norm(),
    }
}

/// Lagrange multipliers fitted from the `n = 0, 1` stationarity conditions
/// and the worst residual over all retained `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityFit {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub max_residual: f64,
    /// `max_residual / (|β|·max|c_n|)`, or relative to `(2πħ/Δx)²` when β = 0.
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Stationarity {
    Fitted(StationarityFit),
    /// The fit presumes ⟨p̂⟩ = 0; this state violates it.
    NonzeroMean {
        mean: f64,
    },
}

/// Checks `[(2πħ/Δx)²n² − (4πħ/Δx)⟨p̂⟩n − β]·c_n = (−1)ⁿα` for all `|n| ≤ n_max`.
pub fn verify_stationarity(state: &FourierState, units: &UnitsConvention) -> Result<Stationarity> {
    let moments = momentum_moments(state, units)?;
    let unit = 2.0 * PI * units.hbar() / state.slit_width();
    if moments.mean.abs() > 1e-10 * unit {
        return Ok(Stationarity::NonzeroMean { mean: moments.mean });
    }
    let a = unit * unit;
    let c0 = state.coefficient(0);
    let c1 = state.coefficient(1);
    if (c0 + c1).norm() == 0.0 {
        return Err(Error::numeric(
            "stationarity fit",
            "c_0 + c_1 = 0, multipliers undetermined",
        ));
    }
    // n = 0: −β c_0 = α;  n = 1: (a − β) c_1 = −α.
    let beta = c1 * a / (c0 + c1);
    let alpha = -beta * c0;
    let mut max_residual: f64 = 0.0;
    let mut max_c: f64 = 0.0;
    for (n, c) in state.indices().zip(state.coefficients()) {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let r = ((Complex64::new(a * nf * nf, 0.0) - beta) * c - alpha * sign).norm();
        max_residual = max_residual.max(r);
        max_c = max_c.max(c.norm());
    }
    let scale = if beta.norm() > 0.0 { beta.norm() } else { a } * max_c;
    Ok(Stationarity::Fitted(StationarityFit {
        alpha,
        beta,
        max_residual,
        relative_residual: max_residual / scale,
    }))
}

/// Standard deviation of a position density supported on the slit; never
/// exceeds Δx/2.
pub fn popoviciu_sigma_x(density: &SampledDensity, delta_x: f64) -> Result<f64> {
    let dx = require_positive("delta_x", delta_x)?;
    density.check_normalized()?;
    if let Some(x) = density.points().iter().find(|x| x.abs() > 0.5 * dx) {
        return Err(Error::Domain {
            value: *x,
            domain: format!("[-{h}, {h}]", h = 0.5 * dx),
        });
    }
    Ok(density.variance().sqrt())
}

/// Relative slack applied to the non-strict (≥) verdicts, so a state that
/// attains a bound up to series truncation is reported as meeting it.
pub const REPORT_EQUALITY_TOL: f64 = 1e-4;

/// Uncertainty products and inequality verdicts for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub hbar: f64,
    pub sigma_x: Option<f64>,
    pub sigma_p: f64,
    pub delta_x: f64,
    /// 2σ_p.
    pub delta_p: f64,
    /// σ_p·Δx/ħ.
    pub product_over_hbar: f64,
    /// Δx·Δp/ħ.
    pub width_product_over_hbar: f64,
    /// |σ_p·Δx/(πħ) − 1|.
    pub sharp_bound_gap: f64,
    pub equality_tolerance: f64,
    pub verdicts: BTreeMap<String, bool>,
}

/// Verdict keys, in report order.
pub mod verdict {
    /// σ_x·σ_p ≥ ħ/2 (only when σ_x is known).
    pub const KENNARD: &str = "kennard";
    /// σ_p·Δx > ħ.
    pub const WIDTH_KENNARD: &str = "width_kennard";
    /// σ_p·Δx ≥ πħ.
    pub const SHARP: &str = "sharp";
    /// Δx·Δp > 2ħ.
    pub const FULL_WIDTH_KENNARD: &str = "full_width_kennard";
    /// Δx·Δp ≥ 2πħ.
    pub const FULL_WIDTH_SHARP: &str = "full_width_sharp";
}

pub fn build_report(
    sigma_x: Option<f64>,
    sigma_p: f64,
    delta_x: f64,
    units: &UnitsConvention,
) -> Result<UncertaintyReport> {
    build_report_with_tolerance(sigma_x, sigma_p, delta_x, units, REPORT_EQUALITY_TOL)
}

pub fn build_report_with_tolerance(
    sigma_x: Option<f64>,
    sigma_p: f64,
    delta_x: f64,
    units: &UnitsConvention,
    equality_tolerance: f64,
) -> Result<UncertaintyReport> {
    let nonneg = |name: &'static str, v: f64| {
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(Error::invalid(
                name,
                format!("must be finite and >= 0, got {v}"),
            ))
        }
    };
    let sigma_p = nonneg("sigma_p", sigma_p)?;
    let sigma_x = sigma_x.map(|s| nonneg("sigma_x", s)).transpose()?;
    let delta_x = require_positive("delta_x", delta_x)?;
    let hbar = units.hbar();
    let delta_p = 2.0 * sigma_p;
    let product = sigma_p * delta_x / hbar;
    let width_product = delta_x * delta_p / hbar;
    let at_least = |value: f64, bound: f64| value >= bound * (1.0 - equality_tolerance);

    let mut verdicts = BTreeMap::new();
    if let Some(sx) = sigma_x {
        verdicts.insert(
            verdict::KENNARD.to_string(),
            at_least(sx * sigma_p / hbar, 0.5),
        );
    }
    verdicts.insert(verdict::WIDTH_KENNARD.to_string(), product > 1.0);
    verdicts.insert(verdict::SHARP.to_string(), at_least(product, PI));
    verdicts.insert(verdict::FULL_WIDTH_KENNARD.to_string(), width_product > 2.0);
    verdicts.insert(
        verdict::FULL_WIDTH_SHARP.to_string(),
        at_least(width_product, 2.0 * PI),
    );

    Ok(UncertaintyReport {
        hbar,
        sigma_x,
        sigma_p,
        delta_x,
        delta_p,
        product_over_hbar: product,
        width_product_over_hbar: width_product,
        sharp_bound_gap: (product / PI - 1.0).abs(),
        equality_tolerance,
        verdicts,
    })
}

/// A random slit state: complex Gaussian coefficients for `|n| ≤ n_max`, with
/// the `(−1)ⁿ` direction projected out so the state vanishes at the edges.
pub fn random_constrained_state<R: Rng + ?Sized>(
    rng: &mut R,
    n_max: usize,
    slit_width: f64,
) -> Result<FourierState> {
    let mut c = gaussian_coefficients(rng, n_max);
    project_out_boundary(&mut c, n_max);
    FourierState::new(slit_width, c)
}

/// The truncated minimum-uncertainty state plus `epsilon` times a random
/// complex Gaussian direction, projected so the state vanishes at the edges.
/// Small `epsilon` gives constrained states close to the minimizer.
pub fn perturbed_minimum_state<R: Rng + ?Sized>(
    rng: &mut R,
    n_max: usize,
    slit_width: f64,
    epsilon: f64,
) -> Result<FourierState> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::invalid(
            "epsilon",
            format!("must be finite and >= 0, got {epsilon}"),
        ));
    }
    let base = min_uncertainty_coefficients(n_max, slit_width)?;
    let noise = gaussian_coefficients(rng, n_max);
    let mut c: Vec<Complex64> = base
        .coefficients()
        .iter()
        .zip(noise)
        .map(|(b, z)| b + epsilon * z)
        .collect();
    project_out_boundary(&mut c, n_max);
    FourierState::new(slit_width, c)
}

fn gaussian_coefficients<R: Rng + ?Sized>(rng: &mut R, n_max: usize) -> Vec<Complex64> {
    (0..2 * n_max + 1)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn project_out_boundary(c: &mut [Complex64], n_max: usize) {
    // v_n = (−1)ⁿ with n = i − n_max.
    let sign = |i: usize| {
        if (i + n_max).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    };
    let overlap: Complex64 = c
        .iter()
        .enumerate()
        .map(|(i, z)| z * sign(i))
        .sum::<Complex64>()
        / c.len() as f64;
    for (i, z) in c.iter_mut().enumerate() {
        *z -= overlap * sign(i);
    }
}

/// A random real state with `c_n = c_{−n}` (not constraint-projected).
pub fn random_symmetric_state<R: Rng + ?Sized>(
    rng: &mut R,
    n_max: usize,
    slit_width: f64,
) -> Result<FourierState> {
    let half: Vec<f64> = (0..=n_max).map(|_| rng.sample(StandardNormal)).collect();
    let c = (-(n_max as i64)..=n_max as i64)
        .map(|n| Complex64::new(half[n.unsigned_abs() as usize], 0.0))
        .collect();
    FourierState::new(slit_width, c)
}

/// Builds a position density from a Fourier state on the slit.
pub fn position_density(
    state: &FourierState,
    panels: usize,
    order: usize,
) -> Result<SampledDensity> {
    let h = 0.5 * state.slit_width();
    SampledDensity::from_fn(
        |x| state.position_amplitude(x).norm_sqr(),
        -h,
        h,
        panels,
        order,
    )
}

impl FourierState {
    /// Whether Parseval holds within [`NORMALIZATION_TOL`].
    pub fn is_normalized(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= NORMALIZATION_TOL
    }
}
