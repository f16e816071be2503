use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};

/// Value of the reduced Planck constant in the caller's action units.
///
/// Internally everything is computed with ħ = 1; this type only scales
/// momenta at the report boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitsConvention {
    hbar: f64,
}

impl UnitsConvention {
    pub fn new(hbar: f64) -> Result<Self> {
        Ok(Self {
            hbar: require_positive("hbar", hbar)?,
        })
    }

    /// ħ = 1.
    pub const fn natural() -> Self {
        Self { hbar: 1.0 }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Planck's constant h = 2πħ.
    pub fn h(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }
}

impl Default for UnitsConvention {
    fn default() -> Self {
        Self::natural()
    }
}

/// Geometry of the 4f single-slit arrangement.
///
/// All three lengths must share one unit; the CLI uses metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    slit_width: f64,
    wavelength: f64,
    focal_length: f64,
}

impl SlitGeometry {
    /// Laboratory slit width in metres (477 μm).
    pub const LAB_SLIT_WIDTH: f64 = 477e-6;
    /// HeNe wavelength in metres (632.82 nm).
    pub const LAB_WAVELENGTH: f64 = 632.82e-9;
    /// Default focal length in metres. The laboratory value is not published;
    /// 150 mm keeps the first envelope zeros well inside the sensor.
    pub const DEFAULT_FOCAL_LENGTH: f64 = 0.150;

    pub fn new(slit_width: f64, wavelength: f64, focal_length: f64) -> Result<Self> {
        Ok(Self {
            slit_width: require_positive("slit_width", slit_width)?,
            wavelength: require_positive("wavelength", wavelength)?,
            focal_length: require_positive("focal_length", focal_length)?,
        })
    }

    /// The laboratory configuration in metres.
    pub fn lab() -> Self {
        Self {
            slit_width: Self::LAB_SLIT_WIDTH,
            wavelength: Self::LAB_WAVELENGTH,
            focal_length: Self::DEFAULT_FOCAL_LENGTH,
        }
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }

    /// Vacuum wavenumber k₀ = 2π/λ.
    pub fn k0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    /// Transverse wavenumber imaged to screen position `y` (k = k₀y/f).
    pub fn wavenumber_at(&self, y: f64) -> f64 {
        self.k0() * y / self.focal_length
    }

    /// Screen position of the first envelope zero, y = λf/Δx.
    pub fn lobe_scale(&self) -> f64 {
        self.wavelength * self.focal_length / self.slit_width
    }
}
