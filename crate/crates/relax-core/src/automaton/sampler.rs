//! Monte Carlo estimation of infinite-temperature correlations.
//!
//! Sample `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`,
//! and samples are grouped into fixed-size chunks whose integer
//! accumulators are merged in chunk order, so the output does not depend
//! on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::gates::GateSet;
use super::ImpuritySpec;
use crate::error::{validation, Error, Result};
use crate::series::{CorrelationSeries, SeriesMeta};

/// Samples per deterministic work unit.
pub const CHUNK: u64 = 4096;

/// Default cap on `t_max * L * n_samples`.
pub const DEFAULT_BUDGET: u128 = 2_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerOptions {
    pub budget: u128,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET }
    }
}

fn check_budget(gs: &GateSet, times: &[u64], n_samples: u64, opts: SamplerOptions) -> Result<()> {
    if n_samples == 0 {
        return Err(validation("n_samples", "must be at least 1"));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(validation("times", "must be strictly increasing"));
    }
    let t_max = times.last().copied().unwrap_or(0).max(1) as u128;
    let requested = t_max * gs.l as u128 * n_samples as u128;
    if requested > opts.budget {
        return Err(Error::BudgetError { requested, budget: opts.budget });
    }
    Ok(())
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `n_samples` chunked trajectories; `per_sample` adds into the
/// chunk accumulator of length `width`.
fn run_chunks<F>(n_samples: u64, width: usize, per_sample: F) -> (Vec<i64>, Vec<i64>)
where
    F: Fn(u64, &mut [i64], &mut [i64]) + Sync,
{
    let chunks = n_samples.div_ceil(CHUNK);
    let parts: Vec<(Vec<i64>, Vec<i64>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut s1 = vec![0i64; width];
            let mut s2 = vec![0i64; width];
            let end = ((c + 1) * CHUNK).min(n_samples);
            for i in c * CHUNK..end {
                per_sample(i, &mut s1, &mut s2);
            }
            (s1, s2)
        })
        .collect();
    let mut s1 = vec![0i64; width];
    let mut s2 = vec![0i64; width];
    for (a, b) in parts {
        for k in 0..width {
            s1[k] += a[k];
            s2[k] += b[k];
        }
    }
    (s1, s2)
}

fn mean_and_error(s1: i64, s2: i64, n: u64, scale: f64) -> (f64, f64) {
    let nf = n as f64;
    let mean = s1 as f64 / nf;
    let var = if n > 1 { ((s2 as f64 / nf - mean * mean) * nf / (nf - 1.0)).max(0.0) } else { 0.0 };
    (mean * scale, (var / nf).sqrt() * scale)
}

fn meta(gs: &GateSet, n_samples: u64, seed: u64) -> SeriesMeta {
    SeriesMeta {
        model: gs.model.to_string(),
        l: gs.l,
        impurity: ImpuritySpec::describe(gs.impurity.as_ref()),
        samples: n_samples,
        seed,
    }
}

/// Monte Carlo estimate of `C(j,j;t) = <O_j(t) O_j(0)>` for each probe
/// site (1-based) at the given CA times, from uniformly random initial
/// configurations.
pub fn estimate_autocorrelation(
    gs: &GateSet,
    probe_sites: &[usize],
    times: &[u64],
    n_samples: u64,
    seed: u64,
    opts: SamplerOptions,
) -> Result<Vec<CorrelationSeries>> {
    check_budget(gs, times, n_samples, opts)?;
    if probe_sites.iter().any(|&j| j == 0 || j > gs.l) {
        return Err(validation("probe_sites", format!("sites must lie in [1, {}]", gs.l)));
    }
    let m = gs.local_dim() as u8;
    let np = probe_sites.len();
    let nt = times.len();
    let model = gs.model;
    let (s1, s2) = run_chunks(n_samples, np * nt, |i, s1, s2| {
        let mut rng = sample_rng(seed, i);
        let mut config: Vec<u8> = (0..gs.l).map(|_| rng.random_range(0..m)).collect();
        let o0: Vec<i64> = probe_sites.iter().map(|&j| model.observable(config[j - 1]) as i64).collect();
        let mut t = 0u64;
        for (ti, &target) in times.iter().enumerate() {
            while t < target {
                gs.step(&mut config, &mut rng);
                t += 1;
            }
            for (p, &j) in probe_sites.iter().enumerate() {
                let v = o0[p] * model.observable(config[j - 1]) as i64;
                s1[p * nt + ti] += v;
                s2[p * nt + ti] += v * v;
            }
        }
    });
    let meta = meta(gs, n_samples, seed);
    Ok(probe_sites
        .iter()
        .enumerate()
        .map(|(p, &j)| {
            let (values, errs): (Vec<f64>, Vec<f64>) =
                (0..nt).map(|ti| mean_and_error(s1[p * nt + ti], s2[p * nt + ti], n_samples, 1.0)).unzip();
            CorrelationSeries {
                times: times.iter().map(|&t| t as f64).collect(),
                values,
                std_errors: errs,
                site: j,
                source: j,
                meta: meta.clone(),
            }
        })
        .collect())
}

/// Monte Carlo estimate of the total magnetisation `<sum_j O_j(t)>`
/// starting from a fixed configuration.
pub fn estimate_magnetization(
    gs: &GateSet,
    initial: &[u8],
    times: &[u64],
    n_samples: u64,
    seed: u64,
    opts: SamplerOptions,
) -> Result<CorrelationSeries> {
    check_budget(gs, times, n_samples, opts)?;
    if initial.len() != gs.l || initial.iter().any(|&s| s as usize >= gs.local_dim()) {
        return Err(validation("initial", "configuration length or states do not match the model"));
    }
    let model = gs.model;
    let nt = times.len();
    let (s1, s2) = run_chunks(n_samples, nt, |i, s1, s2| {
        let mut rng = sample_rng(seed, i);
        let mut config = initial.to_vec();
        let mut t = 0u64;
        for (ti, &target) in times.iter().enumerate() {
            while t < target {
                gs.step(&mut config, &mut rng);
                t += 1;
            }
            let v: i64 = config.iter().map(|&s| model.observable(s) as i64).sum();
            s1[ti] += v;
            s2[ti] += v * v;
        }
    });
    let (values, errs) = (0..nt).map(|ti| mean_and_error(s1[ti], s2[ti], n_samples, 1.0)).unzip();
    Ok(CorrelationSeries {
        times: times.iter().map(|&t| t as f64).collect(),
        values,
        std_errors: errs,
        site: 0,
        source: 0,
        meta: meta(gs, n_samples, seed),
    })
}
