//! Sine integral, sinc, and the Lanczos-window state.
//!
//! The Lanczos state is the main lobe of a sinc amplitude truncated at its
//! first zeros, `φ(x) ∝ sinc(2πx/Δx)` on `|x| ≤ Δx/2`. Its momentum amplitude
//! has a closed form in terms of `Si`, and its uncertainty product exceeds the
//! sharp bound by the factor [`lanczos_gamma`].
//!
//! Moment integrals of the momentum density are written in the scaled
//! variable `u = Δx·k/2`, where the density is proportional to
//! `B(u)² = [Si(u + π) − Si(u − π)]²`. `B(u)` decays like `2π·cos(u)/u²`, so
//! second moments have a slowly converging `1/U` tail; integrals are carried
//! out numerically up to [`TAIL_SWITCH`] and completed with an asymptotic tail.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::ProbabilityDensity;
use crate::error::{require_positive, Error, Result};
use crate::quadrature::Integrator;

/// Beyond this value of `u` moment integrals use the asymptotic tail.
pub const TAIL_SWITCH: f64 = 400.0 * PI;

/// Sine integral `Si(x) = ∫₀ˣ sin(t)/t dt`.
///
/// Power series for `|x| ≤ 4`; above that the complex continued fraction for
/// `E₁(ix)`, which yields `Si` through the auxiliary functions. Exactly odd.
pub fn sine_integral(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let t = x.abs();
    let value = if t <= 4.0 {
        si_series(t)
    } else if t.is_infinite() {
        FRAC_PI_2
    } else {
        si_continued_fraction(t)
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

fn si_series(t: f64) -> f64 {
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    for k in 1..60 {
        let kf = k as f64;
        term *= -t2 / ((2.0 * kf) * (2.0 * kf + 1.0));
        let contrib = term / (2.0 * kf + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn si_continued_fraction(t: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, t);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm_sqr() < 1e-32 {
            break;
        }
    }
    let h = Complex64::new(t.cos(), -t.sin()) * h;
    FRAC_PI_2 + h.im
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

fn si_two_pi() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| sine_integral(2.0 * PI))
}

/// Ratio `σ_p·Δx / (πħ)` of the Lanczos state:
/// `(2/√3)·√(1 − 1/(π·Si(2π)))`.
pub fn lanczos_gamma() -> f64 {
    2.0 / 3f64.sqrt() * (1.0 - 1.0 / (PI * si_two_pi())).sqrt()
}

/// `B(u) = Si(u + π) − Si(u − π)`; even in `u`.
pub fn lanczos_envelope(u: f64) -> f64 {
    let u = u.abs();
    sine_integral(u + PI) - sine_integral(u - PI)
}

/// Asymptotic `∫_U^∞ u²·B(u)² du` for large `U`, with error `O(U⁻⁴)`.
fn second_moment_tail(big_u: f64) -> f64 {
    let pi2 = PI * PI;
    let d = big_u * big_u - pi2;
    let g = big_u * big_u / (d * d);
    let smooth = 2.0 * pi2 * (big_u / (2.0 * d) + ((big_u + PI) / (big_u - PI)).ln() / (4.0 * PI));
    let u3 = big_u.powi(3);
    let oscillating = -pi2 * (2.0 * big_u).sin() * g + 5.0 * pi2 * (2.0 * big_u).cos() / u3;
    smooth - 16.0 * pi2 / (3.0 * u3) + oscillating
}

/// Asymptotic `∫_U^∞ B(u)² du`, error `O(U⁻⁴)`.
fn mass_tail(big_u: f64) -> f64 {
    2.0 * PI * PI / (3.0 * big_u.powi(3))
}

fn integrator() -> Integrator {
    Integrator {
        abs_tol: 1e-11,
        rel_tol: 1e-13,
        max_segments: 200,
    }
}

/// `∫_a^b w(u)·B(u)² du` with panels of a quarter period.
fn envelope_integral(a: f64, b: f64, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let f = |u: f64| {
        let e = lanczos_envelope(u);
        weight(u) * e * e
    };
    Ok(integrator().integrate_panels(f, a, b, FRAC_PI_2)?.value)
}

struct EnvelopeMoments {
    second_at_switch: f64,
    mass_at_switch: f64,
}

fn envelope_moments() -> Result<&'static EnvelopeMoments> {
    static MOMENTS: OnceLock<std::result::Result<EnvelopeMoments, Error>> = OnceLock::new();
    MOMENTS
        .get_or_init(|| {
            Ok(EnvelopeMoments {
                second_at_switch: envelope_integral(0.0, TAIL_SWITCH, |u| u * u)?,
                mass_at_switch: envelope_integral(0.0, TAIL_SWITCH, |_| 1.0)?,
            })
        })
        .as_ref()
        .map_err(Clone::clone)
}

/// `∫₀^U u²·B(u)² du`, numerically below [`TAIL_SWITCH`], asymptotically above.
/// `U = ∞` gives the complete integral.
pub fn envelope_second_moment(big_u: f64) -> Result<f64> {
    cumulative_envelope_second_moment(&[big_u]).map(|v| v[0])
}

/// [`envelope_second_moment`] on a nondecreasing grid, integrating only the
/// increments between neighbouring points.
pub fn cumulative_envelope_second_moment(grid: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut prev_u = 0.0;
    let mut acc = 0.0;
    for &u in grid {
        if u.is_nan() || u < prev_u {
            return Err(Error::invalid(
                "grid",
                "must be nonnegative and nondecreasing",
            ));
        }
        if u <= TAIL_SWITCH {
            acc += envelope_integral(prev_u, u, |v| v * v)?;
            prev_u = u;
            out.push(acc);
        } else {
            let m = envelope_moments()?;
            let tail = if u.is_infinite() {
                0.0
            } else {
                second_moment_tail(u)
            };
            out.push(m.second_at_switch + second_moment_tail(TAIL_SWITCH) - tail);
        }
    }
    Ok(out)
}

/// `∫₀^U B(u)² du`, same scheme as [`envelope_second_moment`].
pub fn envelope_mass(big_u: f64) -> Result<f64> {
    if big_u <= TAIL_SWITCH {
        envelope_integral(0.0, big_u.max(0.0), |_| 1.0)
    } else {
        let m = envelope_moments()?;
        let tail = if big_u.is_infinite() {
            0.0
        } else {
            mass_tail(big_u)
        };
        Ok(m.mass_at_switch + mass_tail(TAIL_SWITCH) - tail)
    }
}

/// The Lanczos-window state on a slit of width Δx.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosState {
    slit_width: f64,
}

impl LanczosState {
    pub fn new(slit_width: f64) -> Result<Self> {
        Ok(Self {
            slit_width: require_positive("slit_width", slit_width)?,
        })
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    /// `√(π/(Si(2π)Δx))·sinc(2πx/Δx)` inside the slit, zero on and beyond the edges.
    pub fn position_amplitude(&self, x: f64) -> f64 {
        let dx = self.slit_width;
        if x.abs() >= 0.5 * dx {
            return 0.0;
        }
        (PI / (si_two_pi() * dx)).sqrt() * sinc(2.0 * PI * x / dx)
    }

    /// Real momentum amplitude `√(Δx/(8π²Si(2π)))·B(Δx·k/2)` (unitary transform).
    pub fn momentum_amplitude(&self, k: f64) -> f64 {
        let dx = self.slit_width;
        (dx / (8.0 * PI * PI * si_two_pi())).sqrt() * lanczos_envelope(0.5 * dx * k)
    }

    /// Momentum density per unit wavenumber; exactly even in `k`.
    pub fn momentum_density(&self, k: f64) -> f64 {
        let dx = self.slit_width;
        let b = lanczos_envelope(0.5 * dx * k.abs());
        dx / (8.0 * PI * PI * si_two_pi()) * b * b
    }

    /// `∫_{−K}^{K} k²·|φ̃(k)|² dk`.
    pub fn second_moment_within(&self, k_max: f64) -> Result<f64> {
        let dx = self.slit_width;
        let j = envelope_second_moment(0.5 * dx * k_max.abs())?;
        Ok(2.0 * j / (PI * PI * si_two_pi() * dx * dx))
    }

    /// σ_k from the momentum density over the whole line.
    pub fn sigma_k(&self) -> Result<f64> {
        self.second_moment_within(f64::INFINITY).map(f64::sqrt)
    }

    /// Cumulative γ-estimate `(Δx/π)·√(∫_{|k|≤K} k²|φ̃|² dk)` for each `K` of a
    /// nondecreasing grid.
    pub fn partial_gamma(&self, k_grid: &[f64]) -> Result<Vec<f64>> {
        let dx = self.slit_width;
        let us: Vec<f64> = k_grid.iter().map(|k| 0.5 * dx * k).collect();
        let scale = 2.0 / (PI * PI * si_two_pi());
        Ok(cumulative_envelope_second_moment(&us)?
            .into_iter()
            .map(|j| (scale * j).sqrt() / PI)
            .collect())
    }

    /// Probability outside `|k| ≤ K`.
    pub fn mass_beyond(&self, k_max: f64) -> Result<f64> {
        let u = 0.5 * self.slit_width * k_max.abs();
        let inside = envelope_mass(u)?;
        let total = envelope_mass(f64::INFINITY)?;
        Ok((total - inside) / (2.0 * PI * PI * si_two_pi()))
    }
}

impl ProbabilityDensity for LanczosState {
    fn total_mass(&self) -> f64 {
        envelope_mass(f64::INFINITY)
            .map(|j| j / (2.0 * PI * PI * si_two_pi()))
            .unwrap_or(f64::NAN)
    }

    fn mass_in(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(hi >= lo) {
            return Err(Error::invalid("window", format!("[{lo}, {hi}]")));
        }
        // Both ends within the numerically integrated range use direct
        // quadrature; otherwise fall back to the tail-completed mass.
        let u_lo = 0.5 * self.slit_width * lo;
        let u_hi = 0.5 * self.slit_width * hi;
        let scale = 1.0 / (4.0 * PI * PI * si_two_pi());
        if u_lo.abs() <= TAIL_SWITCH && u_hi.abs() <= TAIL_SWITCH {
            return Ok(scale * envelope_integral(u_lo, u_hi, |_| 1.0)?);
        }
        let signed = |u: f64| envelope_mass(u.abs()).map(|m| m.copysign(u));
        Ok(scale * (signed(u_hi)? - signed(u_lo)?))
    }
}

/// Position amplitude of the Lanczos state.
pub fn eval_lanczos_position(x: f64, state: &LanczosState) -> f64 {
    state.position_amplitude(x)
}

/// Momentum density of the Lanczos state.
pub fn eval_lanczos_momentum_density(k: f64, state: &LanczosState) -> f64 {
    state.momentum_density(k)
}
