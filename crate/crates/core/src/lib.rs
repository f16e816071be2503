//! Numerical toolkit for the sharp position-momentum uncertainty relation of
//! slit-prepared states, `σ_p·Δx ≥ πħ`.
//!
//! * [`quantum`]: states on the slit in the momentum eigenbasis, the
//!   minimum-uncertainty state, momentum moments and the inequality report.
//! * [`special`]: sine integral and the Lanczos-window state with its
//!   exact excess factor γ.
//! * [`concentration`]: the concentration bound λ₀(ξ) on the probability a
//!   momentum window can capture.
//! * [`reanalysis`]: fringe-slope momentum estimates and the ξ/λ₀ verdict table.
//! * [`diffraction`]: 4f intensity, synthetic line-sensor frames, and the
//!   cumulative γ̂ₙ estimator.
//!
//! All routines work in natural units (ħ = 1) unless a [`UnitsConvention`] is
//! passed; lengths may be in any consistent unit.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod concentration;
pub mod density;
pub mod diffraction;
mod error;
pub mod formats;
pub mod quadrature;
pub mod quantum;
pub mod reanalysis;
pub mod special;
pub mod units;

pub use concentration::{
    concentration_probability, lp_lambda0, well_defined_verdict, Lambda0Table, LpBoundResult,
};
pub use density::{ProbabilityDensity, SampledDensity};
pub use diffraction::{
    gamma_trace, intensity_profile, normalize_frame, synthesize_frame, theory_trace, CcdFrame,
    DetectorSpec, EstimatorTrace, NoiseSpec,
};
pub use error::{Error, Result};
pub use quantum::{
    build_report, eval_momentum_wavefunction, eval_position_wavefunction,
    min_uncertainty_coefficients, momentum_moments, popoviciu_sigma_x, verify_constraints,
    verify_stationarity, FourierState, UncertaintyReport,
};
pub use reanalysis::{fringe_delta_p, reanalyze_products, FringeSlopes, ReanalysisRow};
pub use special::{lanczos_gamma, sine_integral, LanczosState};
pub use units::{SlitGeometry, UnitsConvention};
