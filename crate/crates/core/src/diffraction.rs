//! Simulation of the 4f single-slit measurement.
//!
//! The Lanczos state prepared at the slit is imaged onto a line sensor whose
//! coordinate maps to transverse wavenumber by `k = k₀y/f`, so the recorded
//! intensity is `I(y) = (k₀/f)·|φ̃(k₀y/f)|²`. Frames are sampled at pixel
//! centres `y_i = (i − (N+1)/2)·δy`, optionally perturbed by additive Gaussian
//! noise and quantized, and then fed to the cumulative estimator
//!
//! `γ̂_n = (2Δx/(λf))·[Σ_{i=N/2−n+1}^{N/2+n} δy·y_i²·Î_i]^{1/2}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::special::LanczosState;
use crate::units::SlitGeometry;

/// Tolerance on Σ δy·Î_i for frames flagged as normalized.
pub const FRAME_NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    num_pixels: usize,
    pixel_size: f64,
    bit_depth: u32,
}

impl DetectorSpec {
    pub const LAB_PIXELS: usize = 3648;
    pub const LAB_PIXEL_SIZE: f64 = 8e-6;
    pub const DEFAULT_BIT_DEPTH: u32 = 16;

    pub fn new(num_pixels: usize, pixel_size: f64, bit_depth: u32) -> Result<Self> {
        if num_pixels < 2 || !num_pixels.is_multiple_of(2) {
            return Err(Error::invalid(
                "num_pixels",
                format!("must be even and >= 2, got {num_pixels}"),
            ));
        }
        if !(1..=32).contains(&bit_depth) {
            return Err(Error::invalid(
                "bit_depth",
                format!("must be in 1..=32, got {bit_depth}"),
            ));
        }
        Ok(Self {
            num_pixels,
            pixel_size: require_positive("pixel_size", pixel_size)?,
            bit_depth,
        })
    }

    /// 3648 pixels of 8 μm, 16-bit (lengths in metres).
    pub fn lab() -> Self {
        Self {
            num_pixels: Self::LAB_PIXELS,
            pixel_size: Self::LAB_PIXEL_SIZE,
            bit_depth: Self::DEFAULT_BIT_DEPTH,
        }
    }

    pub fn num_pixels(&self) -> usize {
        self.num_pixels
    }

    pub fn pixel_size(&self) -> f64 {
        self.pixel_size
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    /// N·δy.
    pub fn span(&self) -> f64 {
        self.num_pixels as f64 * self.pixel_size
    }

    /// Centre of pixel `i` (1-based); no pixel sits at y = 0.
    pub fn pixel_center(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.num_pixels as f64 + 1.0)) * self.pixel_size
    }

    pub fn pixel_centers(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.num_pixels).map(|i| self.pixel_center(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Standard deviation of additive noise as a fraction of the frame peak.
    pub additive_sigma: f64,
    pub seed: u64,
    /// Quantize to the detector bit depth, saturating at the frame peak.
    pub quantize: bool,
}

impl NoiseSpec {
    pub const DEFAULT_SEED: u64 = 42;

    pub fn noiseless() -> Self {
        Self {
            additive_sigma: 0.0,
            seed: Self::DEFAULT_SEED,
            quantize: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.additive_sigma.is_finite() && self.additive_sigma >= 0.0) {
            return Err(Error::invalid(
                "additive_sigma",
                format!("must be finite and >= 0, got {}", self.additive_sigma),
            ));
        }
        Ok(())
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::noiseless()
    }
}

/// One exposure of the line sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdFrame {
    detector: DetectorSpec,
    intensities: Vec<f64>,
    normalized: bool,
}

impl CcdFrame {
    /// Wraps raw intensities. If `normalized` is set the caller asserts
    /// Σ δy·Î_i = 1; this is checked.
    pub fn new(detector: DetectorSpec, intensities: Vec<f64>, normalized: bool) -> Result<Self> {
        if intensities.len() != detector.num_pixels {
            return Err(Error::invalid(
                "intensities",
                format!(
                    "{} values for {} pixels",
                    intensities.len(),
                    detector.num_pixels
                ),
            ));
        }
        if intensities.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("intensities", "must be finite and >= 0"));
        }
        let frame = Self {
            detector,
            intensities,
            normalized,
        };
        if normalized {
            let total = frame.integrated_intensity();
            if (total - 1.0).abs() > FRAME_NORMALIZATION_TOL {
                return Err(Error::invalid(
                    "intensities",
                    format!("flagged normalized but Σ δy·I = {total}"),
                ));
            }
        }
        Ok(frame)
    }

    pub fn detector(&self) -> &DetectorSpec {
        &self.detector
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Σ δy·I_i.
    pub fn integrated_intensity(&self) -> f64 {
        self.detector.pixel_size * self.intensities.iter().sum::<f64>()
    }
}

/// Cumulative estimator values for `n = 1..=N/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorTrace {
    pub gamma_hat: Vec<f64>,
    /// Outer edge `n·δy` of the pixels summed at step `n`.
    pub y_extent: Vec<f64>,
}

impl EstimatorTrace {
    pub fn last(&self) -> Option<f64> {
        self.gamma_hat.last().copied()
    }
}

/// `I(y) = (k₀/f)·|φ̃(k₀y/f)|²`, a density per unit screen length.
pub fn intensity_profile(geometry: &SlitGeometry, y: f64) -> f64 {
    let state = LanczosState::new(geometry.slit_width()).expect("geometry is validated");
    let scale = geometry.k0() / geometry.focal_length();
    scale * state.momentum_density(scale * y)
}

fn exact_samples(geometry: &SlitGeometry, detector: &DetectorSpec) -> Vec<f64> {
    let state = LanczosState::new(geometry.slit_width()).expect("geometry is validated");
    let scale = geometry.k0() / geometry.focal_length();
    detector
        .pixel_centers()
        .map(|y| scale * state.momentum_density(scale * y))
        .collect()
}

fn apply_noise(exact: &[f64], detector: &DetectorSpec, noise: &NoiseSpec) -> Vec<f64> {
    let peak = exact.iter().copied().fold(0.0, f64::max);
    let mut values = exact.to_vec();
    if noise.additive_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        let sigma = noise.additive_sigma * peak;
        for v in values.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *v += sigma * z;
        }
    }
    if noise.quantize && peak > 0.0 {
        let levels = ((1u64 << detector.bit_depth) - 1) as f64;
        let step = peak / levels;
        for v in values.iter_mut() {
            *v = (v.clamp(0.0, peak) / step).round() * step;
        }
    }
    for v in values.iter_mut() {
        *v = v.max(0.0);
    }
    values
}

/// Samples the intensity at pixel centres and applies the noise model.
/// Deterministic for a fixed seed.
pub fn synthesize_frame(
    geometry: &SlitGeometry,
    detector: &DetectorSpec,
    noise: &NoiseSpec,
) -> Result<CcdFrame> {
    noise.validate()?;
    let values = apply_noise(&exact_samples(geometry, detector), detector, noise);
    CcdFrame::new(*detector, values, false)
}

/// Rescales a frame so that Σ δy·Î_i = 1.
pub fn normalize_frame(frame: &CcdFrame) -> Result<CcdFrame> {
    let total = frame.integrated_intensity();
    if !(total > 0.0) {
        return Err(Error::invalid("frame", "total intensity is zero"));
    }
    let dy = frame.detector.pixel_size;
    let mut intensities: Vec<f64> = frame.intensities.iter().map(|v| v / total).collect();
    // One correction pass absorbs the rounding of the first division.
    let residual = dy * intensities.iter().sum::<f64>();
    intensities.iter_mut().for_each(|v| *v /= residual);
    CcdFrame::new(frame.detector, intensities, true)
}

/// Runs the cumulative estimator outward from the sensor centre.
pub fn gamma_trace(frame: &CcdFrame, geometry: &SlitGeometry) -> Result<EstimatorTrace> {
    if !frame.normalized {
        return Err(Error::invalid(
            "frame",
            "the estimator needs a normalized frame",
        ));
    }
    let det = &frame.detector;
    let half = det.num_pixels / 2;
    let dy = det.pixel_size;
    let prefactor = 2.0 * geometry.slit_width() / (geometry.wavelength() * geometry.focal_length());
    let mut acc = 0.0;
    let mut gamma_hat = Vec::with_capacity(half);
    let mut y_extent = Vec::with_capacity(half);
    for n in 1..=half {
        // 1-based pixels N/2 − n + 1 and N/2 + n.
        let left = half - n + 1;
        let right = half + n;
        for i in [left, right] {
            let y = det.pixel_center(i);
            acc += dy * y * y * frame.intensities[i - 1];
        }
        gamma_hat.push(prefactor * acc.sqrt());
        y_extent.push(n as f64 * dy);
    }
    Ok(EstimatorTrace {
        gamma_hat,
        y_extent,
    })
}

/// Noise-free estimator value `(Δx/π)·√(∫_{|k|≤k₀y/f} k²|φ̃|² dk)` for each
/// screen half-width `y` of a nondecreasing grid; tends to γ as y → ∞.
pub fn theory_trace(geometry: &SlitGeometry, y_grid: &[f64]) -> Result<Vec<f64>> {
    if y_grid.iter().any(|y| y.is_nan() || *y < 0.0) || y_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(
            "y_grid",
            "must be nonnegative and nondecreasing",
        ));
    }
    let state = LanczosState::new(geometry.slit_width())?;
    let k: Vec<f64> = y_grid.iter().map(|&y| geometry.wavenumber_at(y)).collect();
    state.partial_gamma(&k)
}

/// Summary of the final estimator value over many noise realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseStudy {
    pub additive_sigma: f64,
    pub noiseless_gamma: f64,
    pub mean_gamma: f64,
    pub std_gamma: f64,
    /// Fraction of realizations with γ̂ > 1.
    pub fraction_above_one: f64,
    pub samples: Vec<f64>,
}

/// Final estimator value `γ̂_{N/2}` for each seed, and its statistics.
pub fn noise_study(
    geometry: &SlitGeometry,
    detector: &DetectorSpec,
    additive_sigma: f64,
    quantize: bool,
    seeds: impl IntoIterator<Item = u64>,
) -> Result<NoiseStudy> {
    let exact = exact_samples(geometry, detector);
    let final_gamma = |values: Vec<f64>| -> Result<f64> {
        let frame = normalize_frame(&CcdFrame::new(*detector, values, false)?)?;
        gamma_trace(&frame, geometry)?
            .last()
            .ok_or_else(|| Error::numeric("noise study", "empty trace"))
    };
    let noiseless_gamma = final_gamma(exact.clone())?;
    let samples = seeds
        .into_iter()
        .map(|seed| {
            let spec = NoiseSpec {
                additive_sigma,
                seed,
                quantize,
            };
            spec.validate()?;
            final_gamma(apply_noise(&exact, detector, &spec))
        })
        .collect::<Result<Vec<f64>>>()?;
    if samples.is_empty() {
        return Err(Error::invalid("seeds", "at least one seed is required"));
    }
    let count = samples.len() as f64;
    let mean_gamma = samples.iter().sum::<f64>() / count;
    let std_gamma = (samples
        .iter()
        .map(|g| (g - mean_gamma).powi(2))
        .sum::<f64>()
        / count)
        .sqrt();
    let fraction_above_one = samples.iter().filter(|g| **g > 1.0).count() as f64 / count;
    Ok(NoiseStudy {
        additive_sigma,
        noiseless_gamma,
        mean_gamma,
        std_gamma,
        fraction_above_one,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detector_validation() {
        assert!(DetectorSpec::new(3647, 8e-6, 16).is_err());
        assert!(DetectorSpec::new(0, 8e-6, 16).is_err());
        assert!(DetectorSpec::new(10, 0.0, 16).is_err());
        assert!(DetectorSpec::new(10, 1.0, 0).is_err());
    }

    #[test]
    fn pixel_centres_straddle_origin() {
        let d = DetectorSpec::new(4, 1.0, 8).unwrap();
        let ys: Vec<f64> = d.pixel_centers().collect();
        assert_eq!(ys, vec![-1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn normalize_rejects_dark_frame() {
        let d = DetectorSpec::new(4, 1.0, 8).unwrap();
        let f = CcdFrame::new(d, vec![0.0; 4], false).unwrap();
        assert!(normalize_frame(&f).is_err());
    }

    #[test]
    fn frame_rejects_bad_data() {
        let d = DetectorSpec::new(4, 1.0, 8).unwrap();
        assert!(CcdFrame::new(d, vec![1.0; 3], false).is_err());
        assert!(CcdFrame::new(d, vec![1.0, -1.0, 0.0, 0.0], false).is_err());
        assert!(CcdFrame::new(d, vec![1.0; 4], true).is_err());
    }

    #[test]
    fn estimator_needs_normalized_frame() {
        let g = SlitGeometry::lab();
        let d = DetectorSpec::new(4, 1e-5, 8).unwrap();
        let f = CcdFrame::new(d, vec![1.0; 4], false).unwrap();
        assert!(gamma_trace(&f, &g).is_err());
    }

    #[test]
    fn quantization_saturates_and_snaps_to_levels() {
        let d = DetectorSpec::new(4, 1.0, 2).unwrap();
        let spec = NoiseSpec {
            additive_sigma: 0.0,
            seed: 1,
            quantize: true,
        };
        let q = apply_noise(&[0.0, 0.2, 0.5, 3.0], &d, &spec);
        assert_eq!(q, vec![0.0, 0.0, 1.0, 3.0]);
    }

    #[test]
    fn theory_trace_rejects_unsorted_grid() {
        assert!(theory_trace(&SlitGeometry::lab(), &[1e-3, 5e-4]).is_err());
    }
}
