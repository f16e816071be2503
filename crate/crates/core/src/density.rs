//! One-dimensional probability densities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Tolerance on total probability for densities entering moment or window
/// computations.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Anything that can report how much probability it places in an interval.
pub trait ProbabilityDensity {
    /// Total probability over the whole line.
    fn total_mass(&self) -> f64;

    /// Probability inside `[lo, hi]`.
    fn mass_in(&self, lo: f64, hi: f64) -> Result<f64>;

    fn check_normalized(&self) -> Result<()> {
        let total = self.total_mass();
        if (total - 1.0).abs() <= NORMALIZATION_TOL {
            Ok(())
        } else {
            Err(Error::invalid(
                "density",
                format!(
                    "total probability {total} differs from 1 by more than {NORMALIZATION_TOL:e}"
                ),
            ))
        }
    }
}

/// A density discretized as point masses on a grid.
///
/// Smooth densities are discretized with composite Gauss–Legendre weights, so
/// moments of polynomial degree below twice the panel order are exact.
/// Genuine atoms (e.g. mass concentrated at the slit edges) are represented
/// directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledDensity {
    points: Vec<f64>,
    masses: Vec<f64>,
}

impl SampledDensity {
    /// Builds a density from atoms. Points must be sorted ascending and masses
    /// nonnegative.
    pub fn from_masses(points: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if points.len() != masses.len() || points.is_empty() {
            return Err(Error::invalid(
                "masses",
                format!("{} points vs {} masses", points.len(), masses.len()),
            ));
        }
        if points.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("points", "must be sorted ascending"));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::invalid("masses", "must be finite and nonnegative"));
        }
        Ok(Self { points, masses })
    }

    /// Discretizes `f` on `[lo, hi]` with `panels` panels of `order`-point
    /// Gauss–Legendre rules. Negative samples are rejected.
    pub fn from_fn<F: Fn(f64) -> f64>(
        f: F,
        lo: f64,
        hi: f64,
        panels: usize,
        order: usize,
    ) -> Result<Self> {
        if !(hi > lo) || panels == 0 {
            return Err(Error::invalid(
                "interval",
                format!("[{lo}, {hi}] with {panels} panels"),
            ));
        }
        let rule = GaussLegendre::new(order)?;
        let width = (hi - lo) / panels as f64;
        let mut points = Vec::with_capacity(panels * order);
        let mut masses = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lo + width * p as f64;
            for (x, w) in rule.on_interval(a, a + width) {
                let v = f(x);
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::invalid("density", format!("value {v} at {x}")));
                }
                points.push(x);
                masses.push(w * v);
            }
        }
        Ok(Self { points, masses })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Rescales so the total mass is exactly 1 (up to rounding).
    pub fn normalized(mut self) -> Result<Self> {
        let total: f64 = self.masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("density", "total mass is zero"));
        }
        self.masses.iter_mut().for_each(|m| *m /= total);
        Ok(self)
    }

    pub fn mean(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.masses)
            .map(|(x, m)| x * m)
            .sum()
    }

    /// Central second moment.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.points
            .iter()
            .zip(&self.masses)
            .map(|(x, m)| (x - mean).powi(2) * m)
            .sum()
    }
}

impl ProbabilityDensity for SampledDensity {
    fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    fn mass_in(&self, lo: f64, hi: f64) -> Result<f64> {
        Ok(self
            .points
            .iter()
            .zip(&self.masses)
            .filter(|(x, _)| (lo..=hi).contains(*x))
            .map(|(_, m)| m)
            .sum())
    }
}
