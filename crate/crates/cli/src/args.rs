use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sharpslit_core::concentration::{DEFAULT_GRID_SIZE, DEFAULT_WELL_DEFINED_THRESHOLD};
use sharpslit_core::quantum::DEFAULT_N_MAX;

#[derive(Debug, Parser)]
#[command(
    name = "sharpslit",
    version,
    about = "Sharp position-momentum uncertainty for slit-prepared states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum-uncertainty state: coefficients, densities and the inequality report.
    Minstate(MinstateArgs),
    /// Lanczos-window state: densities, γ and the inequality report.
    Lanczos(LanczosArgs),
    /// Concentration bound λ₀(ξ) for a list of ξ values.
    Lpbound(LpboundArgs),
    /// ξ, λ₀ and well-definedness verdicts for reported products Δx·Δp = a·ħ.
    Reanalyze(ReanalyzeArgs),
    /// Synthesize a line-sensor frame of the 4f diffraction pattern.
    Simulate(SimulateArgs),
    /// Run the cumulative γ̂ₙ estimator on a frame CSV.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MinstateArgs {
    /// Slit width Δx (plain numbers are metres; nm, um, mm suffixes accepted).
    #[arg(long, default_value = "477um", value_parser = parse_length, allow_hyphen_values = true)]
    pub slit_width: f64,
    /// Largest retained mode |n|.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub nmax: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct LanczosArgs {
    /// Slit width Δx (plain numbers are metres; nm, um, mm suffixes accepted).
    #[arg(long, default_value = "477um", value_parser = parse_length, allow_hyphen_values = true)]
    pub slit_width: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct LpboundArgs {
    /// Comma-separated ξ values.
    #[arg(long, default_value = "0.179,0.392,0.433", value_parser = parse_list, allow_hyphen_values = true)]
    pub xi: FloatList,
    /// Gauss–Legendre nodes in the Nyström discretization.
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ReanalyzeArgs {
    /// Comma-separated products a, in units of ħ.
    #[arg(long, default_value = "1.128,2.464,2.723", value_parser = parse_list, allow_hyphen_values = true)]
    pub a: FloatList,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: usize,
    /// Probability a window must capture to count as well defined.
    #[arg(long, default_value_t = DEFAULT_WELL_DEFINED_THRESHOLD)]
    pub threshold: f64,
    /// Mode detuning δω for the fringe-slope momentum estimate.
    #[arg(long, requires_all = ["xdot_max", "xdot_min"], allow_hyphen_values = true)]
    pub delta_omega: Option<f64>,
    #[arg(long, requires = "delta_omega", allow_hyphen_values = true)]
    pub xdot_max: Option<f64>,
    #[arg(long, requires = "delta_omega", allow_hyphen_values = true)]
    pub xdot_min: Option<f64>,
    /// Multiply the fringe-slope estimate by π.
    #[arg(long)]
    pub pi_correction: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// Slit width Δx.
    #[arg(long, default_value = "477um", value_parser = parse_length, allow_hyphen_values = true)]
    pub slit_width: f64,
    /// Laser wavelength.
    #[arg(long, default_value = "632.82nm", value_parser = parse_length, allow_hyphen_values = true)]
    pub wavelength: f64,
    /// Focal length of the transform lens.
    #[arg(long, default_value = "150mm", value_parser = parse_length, allow_hyphen_values = true)]
    pub focal_length: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Number of pixels (even).
    #[arg(long, default_value_t = 3648)]
    pub pixels: usize,
    /// Pixel pitch δy.
    #[arg(long, default_value = "8um", value_parser = parse_length, allow_hyphen_values = true)]
    pub pixel_size: f64,
    #[arg(long, default_value_t = 16)]
    pub bit_depth: u32,
    /// Additive Gaussian noise, as a fraction of the peak intensity.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Quantize to the bit depth, saturating at the frame peak.
    #[arg(long)]
    pub quantize: bool,
    /// Also run the final estimator over seeds 0..N and report statistics.
    #[arg(long)]
    pub study_seeds: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Frame CSV written by `simulate`.
    pub frame: PathBuf,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Pixel pitch; inferred from the y_mm column when omitted.
    #[arg(long, value_parser = parse_length, allow_hyphen_values = true)]
    pub pixel_size: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub bit_depth: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

/// A comma-separated list of numbers; may be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn parse_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(FloatList)
}

/// Parses a length in metres, accepting `nm`, `um`, `µm` and `mm` suffixes.
pub fn parse_length(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (number, scale) = [
        ("nm", 1e-9),
        ("um", 1e-6),
        ("µm", 1e-6),
        ("mm", 1e-3),
        ("m", 1.0),
    ]
    .iter()
    .find_map(|(suffix, scale)| s.strip_suffix(suffix).map(|n| (n, *scale)))
    .unwrap_or((s, 1.0));
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|e| format!("`{s}` is not a length: {e}"))?;
    let metres = value * scale;
    if metres.is_finite() && metres > 0.0 {
        Ok(metres)
    } else {
        Err(format!("must be a positive length, got `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_with_suffixes() {
        assert_eq!(parse_length("477um").unwrap(), 477.0 * 1e-6);
        assert_eq!(parse_length("632.82nm").unwrap(), 632.82 * 1e-9);
        assert_eq!(parse_length("150mm").unwrap(), 150.0 * 1e-3);
        assert_eq!(parse_length(" 0.5 m").unwrap(), 0.5);
        assert_eq!(parse_length("2e-3").unwrap(), 2e-3);
        assert_eq!(parse_length("8µm").unwrap(), 8.0 * 1e-6);
    }

    #[test]
    fn rejects_bad_lengths() {
        for bad in ["0", "-1mm", "abc", "mm", "inf", "NaNum"] {
            assert!(parse_length(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(
            parse_list("0.1, 0.2,0.3").unwrap(),
            FloatList(vec![0.1, 0.2, 0.3])
        );
        assert_eq!(parse_list("").unwrap(), FloatList(vec![]));
        assert!(parse_list("0.1,x").is_err());
    }

    #[test]
    fn command_line_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
