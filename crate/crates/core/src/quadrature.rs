//! Numerical integration on finite intervals.
//!
//! Two tools live here: fixed Gauss–Legendre rules (used for Nyström
//! discretizations and for sampling densities) and an adaptive
//! Gauss–Kronrod 7/15 integrator with a global error budget (used for every
//! finite-interval integral of an analytic density).

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on the three-term Legendre recurrence.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid(
                "n",
                "a Gauss-Legendre rule needs at least one node",
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, z);
                dp = nf * (z * p - p_prev) / (z * z - 1.0);
                let step = p / dp;
                z -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            // Recompute the derivative at the converged node.
            let (p, p_prev) = legendre_pair(n, z);
            if z * z != 1.0 {
                dp = nf * (z * p - p_prev) / (z * z - 1.0);
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes on `[-1, 1]`, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Returns `(P_n(z), P_{n-1}(z))`.
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut p_prev = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0) * z * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-interval |Kronrod - Gauss| differences.
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive Gauss–Kronrod integrator.
///
/// Intervals are bisected largest-error-first until the summed error estimate
/// drops below `max(abs_tol, rel_tol * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_segments: 2000,
        }
    }
}

impl Integrator {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::invalid(
                "bounds",
                format!("[{a}, {b}] must be finite"),
            ));
        }
        if a == b {
            return Ok(Integral {
                value: 0.0,
                abs_error: 0.0,
            });
        }
        let mut segments = vec![gk15(&f, a, b)];
        let min_width = (b - a).abs() * 1e-14;
        loop {
            let value: f64 = segments.iter().map(|s| s.value).sum();
            let error: f64 = segments.iter().map(|s| s.error).sum();
            if !value.is_finite() {
                return Err(Error::numeric(
                    "adaptive quadrature",
                    "integrand is not finite",
                ));
            }
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                return Ok(Integral {
                    value,
                    abs_error: error,
                });
            }
            let (worst, _) = segments
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .expect("segment list is never empty");
            let seg = segments[worst];
            if segments.len() >= self.max_segments || (seg.b - seg.a).abs() < min_width {
                // Roundoff-limited: accept when the error is at the noise floor.
                if error <= 1e3 * f64::EPSILON * value.abs().max(self.abs_tol) {
                    return Ok(Integral {
                        value,
                        abs_error: error,
                    });
                }
                return Err(Error::numeric(
                    "adaptive quadrature",
                    format!(
                        "no convergence on [{a}, {b}]: error estimate {error:e} after {} segments",
                        segments.len()
                    ),
                ));
            }
            let m = 0.5 * (seg.a + seg.b);
            segments[worst] = gk15(&f, seg.a, m);
            segments.push(gk15(&f, m, seg.b));
        }
    }

    /// Splits `[a, b]` into panels no wider than `panel_width` and integrates
    /// each adaptively; the absolute tolerance is shared evenly across panels.
    pub fn integrate_panels<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        b: f64,
        panel_width: f64,
    ) -> Result<Integral> {
        if !(panel_width > 0.0) {
            return Err(Error::invalid("panel_width", "must be > 0"));
        }
        let panels = (((b - a).abs() / panel_width).ceil() as usize).max(1);
        let per_panel = Integrator {
            abs_tol: self.abs_tol / panels as f64,
            ..*self
        };
        let step = (b - a) / panels as f64;
        let mut total = Integral {
            value: 0.0,
            abs_error: 0.0,
        };
        for i in 0..panels {
            let lo = a + step * i as f64;
            let hi = if i + 1 == panels { b } else { lo + step };
            let part = per_panel.integrate(&f, lo, hi)?;
            total.value += part.value;
            total.abs_error += part.abs_error;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(10).unwrap();
        // degree 19 is the highest exactly integrated
        let integral = rule.integrate(|x| x.powi(18) + 3.0 * x.powi(7), -1.0, 1.0);
        assert_relative_eq!(integral, 2.0 / 19.0, max_relative = 1e-13);
        let w: f64 = rule.weights().iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_legendre_large_rule_nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(801).unwrap();
        assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
        assert_eq!(rule.nodes()[400], 0.0);
        let value = rule.integrate(f64::cos, 0.0, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(value, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn zero_node_rule_is_rejected() {
        assert!(GaussLegendre::new(0).is_err());
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let f = |x: f64| 1.0 / (1e-4 + x * x);
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        let got = Integrator::default().integrate(f, -1.0, 1.0).unwrap();
        assert_relative_eq!(got.value, exact, max_relative = 1e-11);
    }

    #[test]
    fn panels_match_single_interval() {
        let f = |x: f64| (3.0 * x).sin().powi(2);
        let whole = Integrator::default().integrate(f, 0.0, 40.0).unwrap();
        let split = Integrator::default()
            .integrate_panels(f, 0.0, 40.0, 1.0)
            .unwrap();
        assert_relative_eq!(whole.value, split.value, max_relative = 1e-11);
        assert_relative_eq!(
            split.value,
            20.0 - (240.0f64).sin() / 12.0,
            max_relative = 1e-11
        );
    }

    #[test]
    fn empty_interval_is_zero() {
        let got = Integrator::default().integrate(|x| x, 2.0, 2.0).unwrap();
        assert_eq!(got.value, 0.0);
    }
}
