//! Least upper bound on the momentum probability a slit-confined state can
//! place inside a momentum window.
//!
//! For a slit of width Δx and a window of width Δp the bound depends only on
//! `ξ = Δx·Δp/h`. It is the top eigenvalue of the concentration operator
//! on `[-1, 1]` with kernel `sin(c(u − v))/(π(u − v))`, where the half-width
//! of the slit (Δx/2) and the half-band (Δp/2ħ) combine into
//! `c = Δx·Δp/(4ħ) = πξ/2`.
//!
//! The operator is discretized by Gauss–Legendre Nyström and symmetrized as
//! `W^{1/2} K W^{1/2}`, which converges spectrally for this analytic kernel.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::density::ProbabilityDensity;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::units::UnitsConvention;

pub const DEFAULT_GRID_SIZE: usize = 400;
pub const MIN_GRID_SIZE: usize = 32;
/// Probability weight a window must capture for its width to count as a
/// meaningful uncertainty.
pub const DEFAULT_WELL_DEFINED_THRESHOLD: f64 = 0.70;

const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpBoundResult {
    pub xi: f64,
    /// Kernel bandwidth c = πξ/2.
    pub kernel_c: f64,
    pub lambda0: f64,
    pub grid_size: usize,
    /// ‖A v − λ₀ v‖₂ of the returned eigenpair.
    pub residual: f64,
}

/// `ξ = Δx·Δp/h`.
pub fn xi_from_widths(delta_x: f64, delta_p: f64, units: &UnitsConvention) -> f64 {
    delta_x * delta_p / units.h()
}

pub fn kernel_c(xi: f64) -> f64 {
    0.5 * PI * xi
}

fn validate(xi: f64, grid_size: usize) -> Result<()> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(Error::invalid(
            "xi",
            format!("must be finite and >= 0, got {xi}"),
        ));
    }
    if grid_size < MIN_GRID_SIZE {
        return Err(Error::invalid(
            "grid_size",
            format!("must be >= {MIN_GRID_SIZE}, got {grid_size}"),
        ));
    }
    Ok(())
}

/// Symmetrized Nyström matrix of the concentration operator.
pub fn concentration_matrix(xi: f64, grid_size: usize) -> Result<DMatrix<f64>> {
    validate(xi, grid_size)?;
    let c = kernel_c(xi);
    let rule = GaussLegendre::new(grid_size)?;
    let (u, w) = (rule.nodes(), rule.weights());
    let sw: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    Ok(DMatrix::from_fn(grid_size, grid_size, |i, j| {
        let k = if i == j {
            c / PI
        } else {
            let d = u[i] - u[j];
            (c * d).sin() / (PI * d)
        };
        sw[i] * k * sw[j]
    }))
}

/// All eigenvalues of the discretized operator, ascending.
pub fn concentration_spectrum(xi: f64, grid_size: usize) -> Result<Vec<f64>> {
    let mut values: Vec<f64> = concentration_matrix(xi, grid_size)?
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn residual(a: &DMatrix<f64>, v: &DVector<f64>, lambda: f64) -> f64 {
    (a * v - v * lambda).norm()
}

/// Shifted power iteration from a starting vector; returns the refined pair.
fn power_refine(a: &DMatrix<f64>, start: DVector<f64>) -> (f64, DVector<f64>) {
    // Shift keeps the iteration matrix positive definite (spectrum ⊂ [0, 1]).
    let shift = 1.0;
    let mut v = start.normalize();
    let mut lambda = v.dot(&(a * &v));
    for _ in 0..1000 {
        let next = (a * &v + &v * shift).normalize();
        let next_lambda = next.dot(&(a * &next));
        let converged = (next_lambda - lambda).abs() < 1e-15;
        v = next;
        lambda = next_lambda;
        if converged {
            break;
        }
    }
    (lambda, v)
}

/// Inverse iteration with a shift just above `lambda`, started from the
/// constant vector (the top eigenfunction is even and positive).
fn top_eigenvector(a: &DMatrix<f64>, lambda: f64) -> Option<DVector<f64>> {
    let n = a.nrows();
    let shift = lambda + 1e-9 * lambda.abs().max(1.0);
    let lu = (a - DMatrix::identity(n, n) * shift).lu();
    let mut v = DVector::from_element(n, 1.0).normalize();
    for _ in 0..3 {
        v = lu.solve(&v)?.normalize();
    }
    Some(v)
}

/// Top eigenvalue λ₀(ξ) of the concentration operator.
pub fn lp_lambda0(xi: f64, grid_size: usize) -> Result<LpBoundResult> {
    let a = concentration_matrix(xi, grid_size)?;
    let lambda = a
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .max_by(f64::total_cmp)
        .expect("grid_size >= 32");
    let start = top_eigenvector(&a, lambda)
        .filter(|v| v.iter().all(|x| x.is_finite()))
        .unwrap_or_else(|| DVector::from_element(grid_size, 1.0));
    let mut lambda = lambda;
    let mut res = residual(&a, &start, lambda);
    if !(res < RESIDUAL_TOL) {
        let (refined, w) = power_refine(&a, start);
        lambda = refined;
        res = residual(&a, &w, lambda);
    }
    if !(res < RESIDUAL_TOL) || !lambda.is_finite() {
        return Err(Error::numeric(
            "concentration eigensolve",
            format!("xi = {xi}, grid = {grid_size}: eigen-residual {res:e}, lambda = {lambda}"),
        ));
    }
    Ok(LpBoundResult {
        xi,
        kernel_c: kernel_c(xi),
        // The true value lies in [0, 1); rounding may touch the ends.
        lambda0: lambda.clamp(0.0, 1.0),
        grid_size,
        residual: res,
    })
}

/// Thread-safe memo of [`lp_lambda0`] keyed by (ξ rounded to 1e-6, grid).
#[derive(Debug, Default)]
pub struct Lambda0Table {
    entries: RwLock<HashMap<(i64, usize), LpBoundResult>>,
}

impl Lambda0Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, xi: f64, grid_size: usize) -> Result<LpBoundResult> {
        validate(xi, grid_size)?;
        let key = ((xi * 1e6).round() as i64, grid_size);
        if let Some(hit) = self.entries.read().expect("cache lock poisoned").get(&key) {
            return Ok(*hit);
        }
        let computed = lp_lambda0(xi, grid_size)?;
        Ok(*self
            .entries
            .write()
            .expect("cache lock poisoned")
            .entry(key)
            .or_insert(computed))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Probability inside the centred window `[-width/2, width/2]`.
///
/// `width` is measured in the density's own variable (momentum or wavenumber).
pub fn concentration_probability<D: ProbabilityDensity + ?Sized>(
    density: &D,
    width: f64,
) -> Result<f64> {
    if width.is_nan() || width < 0.0 {
        return Err(Error::invalid(
            "delta_p",
            format!("must be >= 0, got {width}"),
        ));
    }
    density.check_normalized()?;
    if width == 0.0 {
        return Ok(0.0);
    }
    if width.is_infinite() {
        return Ok(density.total_mass().clamp(0.0, 1.0));
    }
    let half = 0.5 * width;
    Ok(density.mass_in(-half, half)?.clamp(0.0, 1.0))
}

/// Whether a window capturing `probability` counts as a well-defined
/// uncertainty (closed threshold).
pub fn well_defined_verdict(probability: f64, threshold: f64) -> bool {
    probability >= threshold
}
