//! Re-examination of reported position-momentum products `Δx·Δp = a·ħ`.
//!
//! Each product fixes `ξ = a/2π`; the concentration bound `λ₀(ξ)` caps the
//! probability the momentum window can hold, and a window holding less than
//! the well-definedness threshold is not a meaningful uncertainty.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::concentration::{well_defined_verdict, Lambda0Table, DEFAULT_WELL_DEFINED_THRESHOLD};
use crate::error::{Error, Result};
use crate::units::UnitsConvention;

/// Products `a_i` reported for the three two-mode interferometry runs.
pub const REPORTED_PRODUCTS: [f64; 3] = [1.128, 2.464, 2.723];

/// Fringe velocities and mode detuning of a two-mode interferogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeSlopes {
    /// Frequency shift δω between the modes (rad per unit time).
    pub delta_omega: f64,
    pub xdot_max: f64,
    pub xdot_min: f64,
}

/// Momentum spread estimated from extreme fringe slopes,
/// `ħ·(δω/2)·(ẋ_max − ẋ_min)/(ẋ_max·ẋ_min)`, optionally multiplied by π.
pub fn fringe_delta_p(
    slopes: &FringeSlopes,
    units: &UnitsConvention,
    pi_correction: bool,
) -> Result<f64> {
    let FringeSlopes {
        delta_omega,
        xdot_max,
        xdot_min,
    } = *slopes;
    if xdot_max < xdot_min {
        return Err(Error::invalid(
            "xdot_max",
            "must not be smaller than xdot_min",
        ));
    }
    let denom = xdot_max * xdot_min;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::numeric(
            "fringe-slope momentum estimate",
            "division by a zero fringe velocity",
        ));
    }
    let dp = units.hbar() * 0.5 * delta_omega * (xdot_max - xdot_min) / denom;
    Ok(if pi_correction { PI * dp } else { dp })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReanalysisRow {
    /// Product in units of ħ.
    pub a: f64,
    /// a/2π.
    pub xi: f64,
    pub lambda0: f64,
    pub well_defined: bool,
}

impl ReanalysisRow {
    /// ξ truncated to three decimals, the convention of the published table
    /// (1.128/2π = 0.17953 is listed as 0.179).
    pub fn xi_display(&self) -> String {
        format!("{:.3}", (self.xi * 1000.0).floor() / 1000.0)
    }

    /// λ₀ rounded to three decimals.
    pub fn lambda0_display(&self) -> String {
        format!("{:.3}", self.lambda0)
    }
}

/// Maps each product to its ξ, bound and verdict.
pub fn reanalyze_products(
    a_values: &[f64],
    table: &Lambda0Table,
    grid_size: usize,
) -> Result<Vec<ReanalysisRow>> {
    reanalyze_products_with_threshold(a_values, table, grid_size, DEFAULT_WELL_DEFINED_THRESHOLD)
}

pub fn reanalyze_products_with_threshold(
    a_values: &[f64],
    table: &Lambda0Table,
    grid_size: usize,
    threshold: f64,
) -> Result<Vec<ReanalysisRow>> {
    if a_values.is_empty() {
        return Err(Error::invalid("a", "at least one product is required"));
    }
    a_values
        .iter()
        .map(|&a| {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::invalid(
                    "a",
                    format!("products must be > 0, got {a}"),
                ));
            }
            let xi = a / (2.0 * PI);
            let bound = table.get(xi, grid_size)?;
            Ok(ReanalysisRow {
                a,
                xi,
                lambda0: bound.lambda0,
                well_defined: well_defined_verdict(bound.lambda0, threshold),
            })
        })
        .collect()
}
