//! Correlation time series, time grids and power-law fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default log-grid density.
pub const POINTS_PER_DECADE: usize = 20;

/// Provenance carried by every series.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SeriesMeta {
    pub model: String,
    pub l: usize,
    pub impurity: String,
    pub samples: u64,
    pub seed: u64,
}

/// A correlation function sampled on a time grid. `site` is the probe
/// site and `source` the site of the initial operator (equal for
/// autocorrelations), both 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub site: usize,
    pub source: usize,
    pub meta: SeriesMeta,
}

impl CorrelationSeries {
    /// Exact series (zero error bars).
    pub fn exact(times: Vec<f64>, values: Vec<f64>, site: usize, meta: SeriesMeta) -> Self {
        let std_errors = vec![0.0; times.len()];
        Self {
            times,
            values,
            std_errors,
            site,
            source: site,
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `t,value,stderr` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value,stderr\n");
        for i in 0..self.len() {
            out.push_str(&format!(
                "{},{:.17e},{:.17e}\n",
                self.times[i], self.values[i], self.std_errors[i]
            ));
        }
        out
    }

    /// Parses the output of [`CorrelationSeries::to_csv`].
    pub fn from_csv(text: &str, site: usize) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        let mut errs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (n == 0 && line.starts_with('t')) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(crate::error::validation(
                    &format!("csv line {}", n + 1),
                    "expected three columns",
                ));
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| {
                    crate::error::validation(&format!("csv line {}", n + 1), e.to_string())
                })
            };
            times.push(parse(cols[0])?);
            values.push(parse(cols[1])?);
            errs.push(parse(cols[2])?);
        }
        Ok(Self {
            times,
            values,
            std_errors: errs,
            site,
            source: site,
            meta: SeriesMeta::default(),
        })
    }

    /// Linear interpolation in log t (times must be positive around `t`).
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let i = self.times.partition_point(|&s| s < t);
        if i < self.len() && self.times[i] == t {
            return Some(self.values[i]);
        }
        if i == 0 || i >= self.len() {
            return None;
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = if t0 > 0.0 {
            (t.ln() - t0.ln()) / (t1.ln() - t0.ln())
        } else {
            (t - t0) / (t1 - t0)
        };
        Some(self.values[i - 1] * (1.0 - w) + self.values[i] * w)
    }
}

/// Log-spaced grid from `t_lo` to `t_hi` (both included), `per_decade` points per decade.
pub fn log_grid(t_lo: f64, t_hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(t_lo > 0.0 && t_hi >= t_lo && per_decade > 0);
    let decades = (t_hi / t_lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    let mut out: Vec<f64> = (0..=n)
        .map(|i| t_lo * 10f64.powf(i as f64 / per_decade as f64))
        .collect();
    if let Some(last) = out.last_mut() {
        *last = t_hi;
    }
    out
}

/// Integer log grid `0, 1, 2, ...` up to `t_max`, deduplicated.
pub fn integer_log_grid(t_max: u64, per_decade: usize) -> Vec<u64> {
    let mut out = vec![0u64];
    if t_max == 0 {
        return out;
    }
    for t in log_grid(1.0, t_max as f64, per_decade) {
        let r = t.round() as u64;
        if r > *out.last().unwrap() {
            out.push(r);
        }
    }
    out
}

/// Result of a log-log least-squares fit `C ~ amplitude * t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    pub stderr: f64,
    pub points: usize,
}

impl PowerLawFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * t.powf(self.exponent)
    }
}

/// Minimal number of grid points inside a fit window.
pub const MIN_FIT_POINTS: usize = 8;

/// Weighted least squares of ln C against ln t over `t_lo <= t <= t_hi`.
/// Points are weighted by (C/σ)² when error bars are present, else uniformly.
pub fn fit_power_law(series: &CorrelationSeries, t_lo: f64, t_hi: f64) -> Result<PowerLawFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    let weighted = series.std_errors.iter().any(|&s| s > 0.0);
    for i in 0..series.len() {
        let t = series.times[i];
        if t < t_lo || t > t_hi || t <= 0.0 {
            continue;
        }
        let v = series.values[i];
        if v <= 0.0 {
            return Err(Error::NonPositiveValue { t, value: v });
        }
        let w = if weighted {
            let s = series.std_errors[i];
            if s <= 0.0 {
                continue;
            }
            (v / s).powi(2)
        } else {
            1.0
        };
        xs.push(t.ln());
        ys.push(v.ln());
        ws.push(w);
    }
    let n = xs.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::WindowError {
            lo: t_lo,
            hi: t_hi,
            points: n,
            need: MIN_FIT_POINTS,
        });
    }
    let sw: f64 = ws.iter().sum();
    let mx = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let my = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mx;
        sxx += ws[i] * dx * dx;
        sxy += ws[i] * dx * (ys[i] - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = (0..n)
        .map(|i| ws[i] * (ys[i] - intercept - slope * xs[i]).powi(2))
        .sum();
    let stderr = (rss / (n as f64 - 2.0) / sxx).sqrt();
    Ok(PowerLawFit {
        exponent: slope,
        amplitude: intercept.exp(),
        stderr,
        points: n,
    })
}

/// Time at which two fitted power laws intersect.
pub fn crossover_time(early: &PowerLawFit, late: &PowerLawFit) -> f64 {
    (late.amplitude / early.amplitude).powf(1.0 / (early.exponent - late.exponent))
}

/// Ordinary least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Exponent of `y ~ x^p` from a log-log fit.
pub fn scaling_exponent(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}
