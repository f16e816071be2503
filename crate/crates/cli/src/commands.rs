use std::f64::consts::PI;
use std::fs::File;
use std::io::BufReader;

use serde::Serialize;
use sharpslit_core::concentration::{Lambda0Table, LpBoundResult};
use sharpslit_core::diffraction::{
    gamma_trace, noise_study, normalize_frame, synthesize_frame, theory_trace, DetectorSpec,
    NoiseSpec, NoiseStudy,
};
use sharpslit_core::formats::{read_frame_csv, sig9, write_frame_csv, write_trace_csv};
use sharpslit_core::quantum::{
    build_report, min_uncertainty_coefficients, momentum_moments, popoviciu_sigma_x,
    position_density, verify_constraints, verify_stationarity, ConstraintResiduals, Stationarity,
    UncertaintyReport,
};
use sharpslit_core::reanalysis::{fringe_delta_p, reanalyze_products_with_threshold, FringeSlopes};
use sharpslit_core::special::{lanczos_gamma, LanczosState};
use sharpslit_core::{lp_lambda0, SampledDensity, SlitGeometry, UnitsConvention};

use crate::args::{
    Command, EstimateArgs, GeometryArgs, LanczosArgs, LpboundArgs, MinstateArgs, ReanalyzeArgs,
    SimulateArgs,
};
use crate::error::{from_format, CliError};
use crate::output::OutputDir;

/// Boundary residual above which the truncated series no longer vanishes
/// convincingly at the slit edges.
pub const TRUNCATION_WARNING_THRESHOLD: f64 = 1e-3;

const DENSITY_SAMPLES: usize = 801;
const POSITION_SAMPLES: usize = 201;

pub fn run(command: Command) -> Result<OutputDir, CliError> {
    match command {
        Command::Minstate(a) => minstate(a),
        Command::Lanczos(a) => lanczos(a),
        Command::Lpbound(a) => lpbound(a),
        Command::Reanalyze(a) => reanalyze(a),
        Command::Simulate(a) => simulate(a),
        Command::Estimate(a) => estimate(a),
    }
}

fn display3(v: f64) -> String {
    format!("{v:.3}")
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    command: &'static str,
    version: &'static str,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(command: &'static str, body: T) -> Envelope<T> {
    Envelope {
        command,
        version: env!("CARGO_PKG_VERSION"),
        body,
    }
}

/// Symmetric grid on `[-half, half]` whose middle sample is exactly zero.
fn symmetric_grid(half: f64, samples: usize) -> impl Iterator<Item = f64> {
    let mid = (samples / 2) as f64;
    (0..samples).map(move |i| half * (i as f64 - mid) / mid)
}

fn write_density<F: Fn(f64) -> f64>(
    out: &mut OutputDir,
    name: &str,
    header: &str,
    half: f64,
    samples: usize,
    f: F,
) -> Result<(), CliError> {
    out.write(name, |w| {
        writeln!(w, "{header}")?;
        for x in symmetric_grid(half, samples) {
            writeln!(w, "{},{}", sig9(x), sig9(f(x)))?;
        }
        Ok(())
    })?;
    Ok(())
}

#[derive(Serialize)]
struct MinstateReport {
    slit_width_m: f64,
    n_max: usize,
    report: UncertaintyReport,
    constraints: ConstraintResiduals,
    stationarity_relative_residual: Option<f64>,
    truncation_warning: bool,
    display: ProductDisplay,
}

#[derive(Serialize)]
struct ProductDisplay {
    product_over_hbar: String,
    width_product_over_hbar: String,
}

impl ProductDisplay {
    fn of(r: &UncertaintyReport) -> Self {
        Self {
            product_over_hbar: display3(r.product_over_hbar),
            width_product_over_hbar: display3(r.width_product_over_hbar),
        }
    }
}

fn minstate(args: MinstateArgs) -> Result<OutputDir, CliError> {
    let units = UnitsConvention::natural();
    let dx = args.slit_width;
    let state = min_uncertainty_coefficients(args.nmax, dx)?;
    let moments = momentum_moments(&state, &units)?;
    let sigma_x = popoviciu_sigma_x(&position_density(&state, 64, 16)?.normalized()?, dx)?;
    let report = build_report(Some(sigma_x), moments.sigma_p, dx, &units)?;
    let constraints = verify_constraints(&state);
    let stationarity = match verify_stationarity(&state, &units)? {
        Stationarity::Fitted(fit) => Some(fit.relative_residual),
        Stationarity::NonzeroMean { .. } => None,
    };
    let truncation_warning = constraints.boundary_residual > TRUNCATION_WARNING_THRESHOLD;
    if truncation_warning {
        eprintln!(
            "warning: boundary residual {:.3e} exceeds {TRUNCATION_WARNING_THRESHOLD:e}; \
             n_max = {} truncates the series too early for the state to vanish at the slit edges",
            constraints.boundary_residual, args.nmax
        );
    }

    let mut out = OutputDir::create(&args.out.out)?;
    out.write("minstate_coefficients.csv", |w| {
        writeln!(w, "n,c_n")?;
        for (n, c) in state.indices().zip(state.coefficients()) {
            writeln!(w, "{n},{}", sig9(c.re))?;
        }
        Ok(())
    })?;
    write_density(
        &mut out,
        "minstate_position.csv",
        "x_m,density",
        0.5 * dx,
        POSITION_SAMPLES,
        |x| state.position_amplitude(x).norm_sqr(),
    )?;
    write_density(
        &mut out,
        "minstate_momentum.csv",
        "k_per_m,density",
        8.0 * PI / dx,
        DENSITY_SAMPLES,
        |k| state.momentum_amplitude(k).norm_sqr(),
    )?;
    let display = ProductDisplay::of(&report);
    out.write_json(
        "minstate_report.json",
        &envelope(
            "minstate",
            MinstateReport {
                slit_width_m: dx,
                n_max: args.nmax,
                report,
                constraints,
                stationarity_relative_residual: stationarity,
                truncation_warning,
                display,
            },
        ),
    )?;
    Ok(out)
}

#[derive(Serialize)]
struct LanczosReport {
    slit_width_m: f64,
    gamma: f64,
    /// σ_k·Δx/π with σ_k from quadrature of the momentum density.
    gamma_quadrature: f64,
    density_at_zero: f64,
    report: UncertaintyReport,
    display: LanczosDisplay,
}

#[derive(Serialize)]
struct LanczosDisplay {
    gamma: String,
    product_over_hbar: String,
}

fn lanczos(args: LanczosArgs) -> Result<OutputDir, CliError> {
    let units = UnitsConvention::natural();
    let dx = args.slit_width;
    let state = LanczosState::new(dx)?;
    let gamma = lanczos_gamma();
    let sigma_k = state.sigma_k()?;
    let position = SampledDensity::from_fn(
        |x| state.position_amplitude(x).powi(2),
        -0.5 * dx,
        0.5 * dx,
        32,
        16,
    )?;
    let sigma_x = popoviciu_sigma_x(&position.normalized()?, dx)?;
    // σ_p = γπħ/Δx in closed form.
    let report = build_report(Some(sigma_x), units.hbar() * gamma * PI / dx, dx, &units)?;

    let mut out = OutputDir::create(&args.out.out)?;
    write_density(
        &mut out,
        "lanczos_position.csv",
        "x_m,density",
        0.5 * dx,
        POSITION_SAMPLES,
        |x| state.position_amplitude(x).powi(2),
    )?;
    write_density(
        &mut out,
        "lanczos_momentum.csv",
        "k_per_m,density",
        8.0 * PI / dx,
        DENSITY_SAMPLES,
        |k| state.momentum_density(k),
    )?;
    let display = LanczosDisplay {
        gamma: display3(gamma),
        product_over_hbar: display3(report.product_over_hbar),
    };
    out.write_json(
        "lanczos_report.json",
        &envelope(
            "lanczos",
            LanczosReport {
                slit_width_m: dx,
                gamma,
                gamma_quadrature: sigma_k * dx / PI,
                density_at_zero: state.momentum_density(0.0),
                report,
                display,
            },
        ),
    )?;
    Ok(out)
}

#[derive(Serialize)]
struct BoundRow {
    #[serde(flatten)]
    bound: LpBoundResult,
    display: BoundDisplay,
}

#[derive(Serialize)]
struct BoundDisplay {
    xi: String,
    lambda0: String,
}

#[derive(Serialize)]
struct LpboundReport {
    grid_size: usize,
    rows: Vec<BoundRow>,
}

fn lpbound(args: LpboundArgs) -> Result<OutputDir, CliError> {
    let xis = args.xi.0;
    if xis.is_empty() {
        return Err(CliError::Validation(
            "--xi: at least one value is required".into(),
        ));
    }
    let bounds: Vec<LpBoundResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = xis
            .iter()
            .map(|&xi| scope.spawn(move || lp_lambda0(xi, args.grid_size)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("eigen-solve thread panicked"))
            .collect::<Result<_, _>>()
    })?;

    let mut out = OutputDir::create(&args.out.out)?;
    out.write("lpbound.csv", |w| {
        writeln!(w, "xi,lambda0")?;
        for b in &bounds {
            writeln!(w, "{},{}", sig9(b.xi), sig9(b.lambda0))?;
        }
        Ok(())
    })?;
    let rows = bounds
        .into_iter()
        .map(|bound| BoundRow {
            display: BoundDisplay {
                xi: display3(bound.xi),
                lambda0: display3(bound.lambda0),
            },
            bound,
        })
        .collect();
    out.write_json(
        "lpbound.json",
        &envelope(
            "lpbound",
            LpboundReport {
                grid_size: args.grid_size,
                rows,
            },
        ),
    )?;
    Ok(out)
}

#[derive(Serialize)]
struct ReanalysisJsonRow {
    a: f64,
    xi: f64,
    lambda0: f64,
    well_defined: bool,
    verdict: &'static str,
    display: BoundDisplay,
}

#[derive(Serialize)]
struct FringeEstimate {
    #[serde(flatten)]
    slopes: FringeSlopes,
    pi_correction: bool,
    delta_p: f64,
}

#[derive(Serialize)]
struct ReanalysisReport {
    grid_size: usize,
    threshold: f64,
    rows: Vec<ReanalysisJsonRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fringe: Option<FringeEstimate>,
}

fn verdict_label(well_defined: bool) -> &'static str {
    if well_defined {
        "well-defined"
    } else {
        "not well-defined"
    }
}

fn reanalyze(args: ReanalyzeArgs) -> Result<OutputDir, CliError> {
    if args.a.0.is_empty() {
        return Err(CliError::Validation(
            "--a: at least one product is required".into(),
        ));
    }
    if !(0.0..=1.0).contains(&args.threshold) {
        return Err(CliError::Validation(format!(
            "--threshold: must lie in [0, 1], got {}",
            args.threshold
        )));
    }
    let units = UnitsConvention::natural();
    let fringe = match (args.delta_omega, args.xdot_max, args.xdot_min) {
        (Some(delta_omega), Some(xdot_max), Some(xdot_min)) => {
            let slopes = FringeSlopes {
                delta_omega,
                xdot_max,
                xdot_min,
            };
            Some(FringeEstimate {
                delta_p: fringe_delta_p(&slopes, &units, args.pi_correction)?,
                slopes,
                pi_correction: args.pi_correction,
            })
        }
        _ => None,
    };
    let table = Lambda0Table::new();
    let rows =
        reanalyze_products_with_threshold(&args.a.0, &table, args.grid_size, args.threshold)?;

    let mut out = OutputDir::create(&args.out.out)?;
    out.write("reanalysis.csv", |w| {
        writeln!(w, "a,xi,lambda0,well_defined")?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{}",
                sig9(r.a),
                sig9(r.xi),
                sig9(r.lambda0),
                r.well_defined
            )?;
        }
        Ok(())
    })?;
    let json_rows = rows
        .iter()
        .map(|r| ReanalysisJsonRow {
            a: r.a,
            xi: r.xi,
            lambda0: r.lambda0,
            well_defined: r.well_defined,
            verdict: verdict_label(r.well_defined),
            display: BoundDisplay {
                xi: r.xi_display(),
                lambda0: r.lambda0_display(),
            },
        })
        .collect();
    out.write_json(
        "reanalysis.json",
        &envelope(
            "reanalyze",
            ReanalysisReport {
                grid_size: args.grid_size,
                threshold: args.threshold,
                rows: json_rows,
                fringe,
            },
        ),
    )?;
    Ok(out)
}

#[derive(Serialize)]
struct GeometryJson {
    slit_width_m: f64,
    wavelength_m: f64,
    focal_length_m: f64,
}

impl GeometryJson {
    fn of(g: &SlitGeometry) -> Self {
        Self {
            slit_width_m: g.slit_width(),
            wavelength_m: g.wavelength(),
            focal_length_m: g.focal_length(),
        }
    }
}

#[derive(Serialize)]
struct DetectorJson {
    num_pixels: usize,
    pixel_size_m: f64,
    bit_depth: u32,
    span_m: f64,
}

impl DetectorJson {
    fn of(d: &DetectorSpec) -> Self {
        Self {
            num_pixels: d.num_pixels(),
            pixel_size_m: d.pixel_size(),
            bit_depth: d.bit_depth(),
            span_m: d.span(),
        }
    }
}

#[derive(Serialize)]
struct SimulateReport {
    geometry: GeometryJson,
    detector: DetectorJson,
    noise: NoiseSpec,
    frame_file: String,
    lobe_scale_m: f64,
    peak_intensity: f64,
    integrated_intensity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    noise_study: Option<NoiseStudy>,
}

fn geometry(args: &GeometryArgs) -> Result<SlitGeometry, CliError> {
    Ok(SlitGeometry::new(
        args.slit_width,
        args.wavelength,
        args.focal_length,
    )?)
}

fn simulate(args: SimulateArgs) -> Result<OutputDir, CliError> {
    let geometry = geometry(&args.geometry)?;
    let detector = DetectorSpec::new(args.pixels, args.pixel_size, args.bit_depth)?;
    let noise = NoiseSpec {
        additive_sigma: args.noise_sigma,
        seed: args.seed,
        quantize: args.quantize,
    };
    let frame = synthesize_frame(&geometry, &detector, &noise)?;
    let study = match args.study_seeds {
        Some(0) => return Err(CliError::Validation("--study-seeds: must be >= 1".into())),
        Some(n) => Some(noise_study(
            &geometry,
            &detector,
            args.noise_sigma,
            args.quantize,
            0..n,
        )?),
        None => None,
    };

    let mut out = OutputDir::create(&args.out.out)?;
    let frame_path = out.write("frame.csv", |w| write_frame_csv(w, &frame))?;
    let report = SimulateReport {
        geometry: GeometryJson::of(&geometry),
        detector: DetectorJson::of(&detector),
        noise,
        frame_file: frame_path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned(),
        lobe_scale_m: geometry.lobe_scale(),
        peak_intensity: frame.intensities().iter().cloned().fold(0.0, f64::max),
        integrated_intensity: frame.integrated_intensity(),
        noise_study: study,
    };
    out.write_json("simulate.json", &envelope("simulate", report))?;
    Ok(out)
}

#[derive(Serialize)]
struct EstimateReport {
    geometry: GeometryJson,
    detector: DetectorJson,
    frame_file: String,
    final_gamma_hat: f64,
    theory_at_edge: f64,
    gamma: f64,
    y_edge_m: f64,
    /// |γ̂ − theory at the edge| / γ.
    relative_gap: f64,
    display: EstimateDisplay,
}

#[derive(Serialize)]
struct EstimateDisplay {
    final_gamma_hat: String,
    theory_at_edge: String,
    gamma: String,
}

fn estimate(args: EstimateArgs) -> Result<OutputDir, CliError> {
    let geometry = geometry(&args.geometry)?;
    let file = File::open(&args.frame).map_err(|e| CliError::io(&args.frame, e))?;
    let frame = read_frame_csv(BufReader::new(file), args.pixel_size, args.bit_depth)
        .map_err(|e| from_format(&args.frame, e))?;
    let frame = if frame.is_normalized() {
        frame
    } else {
        normalize_frame(&frame)?
    };
    let trace = gamma_trace(&frame, &geometry)?;
    let theory = theory_trace(&geometry, &trace.y_extent)?;
    let final_gamma_hat = trace
        .last()
        .ok_or_else(|| CliError::Numeric("estimator produced an empty trace".into()))?;
    let theory_at_edge = *theory.last().expect("same length as the trace");
    let gamma = lanczos_gamma();

    let mut out = OutputDir::create(&args.out.out)?;
    out.write("trace.csv", |w| write_trace_csv(w, &trace, &theory))?;
    let report = EstimateReport {
        geometry: GeometryJson::of(&geometry),
        detector: DetectorJson::of(frame.detector()),
        frame_file: args.frame.display().to_string(),
        final_gamma_hat,
        theory_at_edge,
        gamma,
        y_edge_m: *trace.y_extent.last().expect("nonempty trace"),
        relative_gap: (final_gamma_hat - theory_at_edge).abs() / gamma,
        display: EstimateDisplay {
            final_gamma_hat: display3(final_gamma_hat),
            theory_at_edge: display3(theory_at_edge),
            gamma: display3(gamma),
        },
    };
    out.write_json("estimate.json", &envelope("estimate", report))?;
    Ok(out)
}
