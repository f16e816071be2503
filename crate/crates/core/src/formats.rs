//! Plain-text exchange formats.
//!
//! Frame CSV:
//! ```text
//! # normalized=<bool>
//! pixel,y_mm,intensity
//! 1,-1.45880000e1,3.20154851e-6
//! ```
//! Trace CSV: `n,y_mm,gamma_hat,gamma_theory`.
//!
//! Numbers are written with nine significant digits. Lengths are in metres
//! in memory and millimetres on disk.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::diffraction::{normalize_frame, CcdFrame, DetectorSpec, EstimatorTrace};

pub const FRAME_HEADER: &str = "pixel,y_mm,intensity";
pub const TRACE_HEADER: &str = "n,y_mm,gamma_hat,gamma_theory";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] crate::error::Error),
}

/// Nine significant digits in scientific notation.
pub fn sig9(value: f64) -> String {
    format!("{value:.8e}")
}

/// Writes a header line and rows of numbers.
pub fn write_columns<W: Write>(
    mut out: W,
    header: &str,
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(sig9).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_frame_csv<W: Write>(mut out: W, frame: &CcdFrame) -> io::Result<()> {
    writeln!(out, "# normalized={}", frame.is_normalized())?;
    writeln!(out, "{FRAME_HEADER}")?;
    let det = frame.detector();
    for (i, v) in frame.intensities().iter().enumerate() {
        let y_mm = det.pixel_center(i + 1) * 1e3;
        writeln!(out, "{},{},{}", i + 1, sig9(y_mm), sig9(*v))?;
    }
    Ok(())
}

/// Reads a frame CSV. The pixel size is taken from `pixel_size` when given,
/// otherwise from the spread of the `y_mm` column. Frames flagged as
/// normalized are renormalized to absorb the nine-digit rounding.
pub fn read_frame_csv<R: BufRead>(
    input: R,
    pixel_size: Option<f64>,
    bit_depth: u32,
) -> Result<CcdFrame, FormatError> {
    let mut normalized = None;
    let mut saw_header = false;
    let mut ys = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(flag) = comment.trim().strip_prefix("normalized=") {
                normalized = Some(
                    flag.trim()
                        .parse::<bool>()
                        .map_err(|e| FormatError::Parse {
                            line: line_no,
                            message: format!("bad normalized flag: {e}"),
                        })?,
                );
            }
            continue;
        }
        if !saw_header {
            if line != FRAME_HEADER {
                return Err(FormatError::Parse {
                    line: line_no,
                    message: format!("expected header `{FRAME_HEADER}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 3 {
            return Err(FormatError::Parse {
                line: line_no,
                message: format!("expected 3 columns, got {}", cells.len()),
            });
        }
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|e| FormatError::Parse {
                line: line_no,
                message: format!("`{s}`: {e}"),
            })
        };
        let pixel: usize = cells[0].trim().parse().map_err(|e| FormatError::Parse {
            line: line_no,
            message: format!("pixel index: {e}"),
        })?;
        if pixel != values.len() + 1 {
            return Err(FormatError::Parse {
                line: line_no,
                message: format!("pixel {pixel} out of sequence"),
            });
        }
        ys.push(parse(cells[1])? * 1e-3);
        values.push(parse(cells[2])?);
    }
    let normalized = normalized.ok_or(FormatError::Parse {
        line: 1,
        message: "missing `# normalized=<bool>` line".into(),
    })?;
    if values.len() < 2 {
        return Err(FormatError::Parse {
            line: 0,
            message: "frame needs at least two pixels".into(),
        });
    }
    let dy = match pixel_size {
        Some(dy) => dy,
        None => (ys[ys.len() - 1] - ys[0]) / (ys.len() - 1) as f64,
    };
    let detector = DetectorSpec::new(values.len(), dy, bit_depth)?;
    let frame = CcdFrame::new(detector, values, false)?;
    Ok(if normalized {
        normalize_frame(&frame)?
    } else {
        frame
    })
}

/// Writes the estimator trace next to its noise-free counterpart.
pub fn write_trace_csv<W: Write>(out: W, trace: &EstimatorTrace, theory: &[f64]) -> io::Result<()> {
    let rows = trace
        .gamma_hat
        .iter()
        .zip(&trace.y_extent)
        .zip(theory)
        .enumerate()
        .map(|(i, ((g, y), t))| (i + 1, *y, *g, *t));
    let mut out = out;
    writeln!(out, "{TRACE_HEADER}")?;
    for (n, y, g, t) in rows {
        writeln!(out, "{n},{},{},{}", sig9(y * 1e3), sig9(g), sig9(t))?;
    }
    Ok(())
}
