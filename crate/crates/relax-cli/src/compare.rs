//! Pointwise comparison of two series files on a shared grid.

use serde::Serialize;

use relax_core::series::{fit_power_law, CorrelationSeries, PowerLawFit};
use relax_core::Error;

/// Exact-zero error bars still count as agreement within this distance.
const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointComparison {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitComparison {
    pub window: (f64, f64),
    pub a: PowerLawFit,
    pub b: PowerLawFit,
    /// Exponent difference in units of the combined fit error.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub sigmas: f64,
    pub required_fraction: f64,
    pub agreeing: usize,
    pub total: usize,
    pub fraction: f64,
    pub max_abs_z: f64,
    pub pass: bool,
    pub fit: Option<FitComparison>,
    pub points: Vec<PointComparison>,
}

fn check_grids(a: &CorrelationSeries, b: &CorrelationSeries) -> Result<(), Error> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} points vs {}", a.len(), b.len())));
    }
    for (i, (ta, tb)) in a.times.iter().zip(&b.times).enumerate() {
        if (ta - tb).abs() > 1e-12 * ta.abs().max(tb.abs()).max(1.0) {
            return Err(Error::GridMismatch(format!("point {i}: t = {ta} vs {tb}")));
        }
    }
    Ok(())
}

/// `z = (a - b) / sqrt(sa^2 + sb^2)` at every grid point.
pub fn compare(
    a: &CorrelationSeries,
    b: &CorrelationSeries,
    sigmas: f64,
    fraction: f64,
    window: Option<(f64, f64)>,
) -> Result<ComparisonReport, Error> {
    check_grids(a, b)?;
    let points: Vec<PointComparison> = (0..a.len())
        .map(|i| {
            let diff = a.values[i] - b.values[i];
            let err = a.std_errors[i].hypot(b.std_errors[i]);
            let z = if diff.abs() <= EXACT_TOLERANCE {
                0.0
            } else if err > 0.0 {
                diff / err
            } else {
                f64::INFINITY.copysign(diff)
            };
            PointComparison { t: a.times[i], a: a.values[i], b: b.values[i], z }
        })
        .collect();
    let agreeing = points.iter().filter(|p| p.z.abs() <= sigmas).count();
    let total = points.len();
    let frac = if total == 0 { 1.0 } else { agreeing as f64 / total as f64 };
    let fit = window
        .map(|(lo, hi)| -> Result<FitComparison, Error> {
            let fa = fit_power_law(a, lo, hi)?;
            let fb = fit_power_law(b, lo, hi)?;
            let err = fa.stderr.hypot(fb.stderr);
            let diff = fa.exponent - fb.exponent;
            let z = if diff.abs() <= EXACT_TOLERANCE { 0.0 } else { diff / err };
            Ok(FitComparison { window: (lo, hi), a: fa, b: fb, z })
        })
        .transpose()?;
    let fit_ok = fit.as_ref().map_or(true, |f| f.z.abs() <= sigmas);
    Ok(ComparisonReport {
        sigmas,
        required_fraction: fraction,
        agreeing,
        total,
        fraction: frac,
        max_abs_z: points.iter().map(|p| p.z.abs()).fold(0.0, f64::max),
        pass: frac >= fraction && fit_ok,
        fit,
        points,
    })
}
