//! Exact transition matrix of a gate set and the correlations it implies.

use super::gates::GateSet;
use super::ImpuritySpec;
use crate::error::{validation, Error, Result};
use crate::linalg::sparse::{SparseBuilder, SparseOperator};
use crate::series::{CorrelationSeries, SeriesMeta};

/// Default cap on the number of configurations, 3^12.
pub const DEFAULT_STATE_CAP: u128 = 531_441;

pub(crate) fn state_count(gs: &GateSet, cap: u128) -> Result<usize> {
    let size = (gs.local_dim() as u128).pow(gs.l as u32);
    if size > cap {
        return Err(Error::SizeError { size, cap });
    }
    Ok(size as usize)
}

/// Configuration of index `idx` (site 0 most significant).
pub fn decode(mut idx: usize, m: usize, l: usize) -> Vec<u8> {
    let mut c = vec![0u8; l];
    for k in (0..l).rev() {
        c[k] = (idx % m) as u8;
        idx /= m;
    }
    c
}

pub fn encode_config(c: &[u8], m: usize) -> usize {
    super::gates::encode(c, m)
}

/// The one-step transition matrix `P[c][c']`.
pub fn transition_matrix(gs: &GateSet, cap: u128) -> Result<SparseOperator> {
    let n = state_count(gs, cap)?;
    let m = gs.local_dim();
    let mut b = SparseBuilder::new(n);
    for idx in 0..n {
        let c = decode(idx, m, gs.l);
        for (k, &w) in gs.layer_weights.iter().enumerate() {
            let mut outcomes = vec![(c.clone(), w)];
            for rule in gs.layer(k) {
                let mut next = Vec::new();
                for (conf, p) in outcomes {
                    for (o, q) in rule.outcomes(&conf, m) {
                        next.push((o, p * q));
                    }
                }
                outcomes = next;
            }
            for (o, p) in outcomes {
                b.add(idx, encode_config(&o, m), p);
            }
        }
    }
    Ok(b.build())
}

fn observable_vector(gs: &GateSet, site: usize, n: usize) -> Vec<f64> {
    let m = gs.local_dim();
    let stride = m.pow((gs.l - site) as u32);
    (0..n).map(|idx| gs.model.observable(((idx / stride) % m) as u8) as f64).collect()
}

/// Exact `C(j, j0; t)` for every `j` in `probe_sites` and the given source
/// site, at the listed integer times.
pub fn markov_cross_correlation(
    gs: &GateSet,
    source: usize,
    probe_sites: &[usize],
    times: &[u64],
    cap: u128,
) -> Result<Vec<CorrelationSeries>> {
    if source == 0 || source > gs.l || probe_sites.iter().any(|&j| j == 0 || j > gs.l) {
        return Err(validation("probe_sites", format!("sites must lie in [1, {}]", gs.l)));
    }
    let p = transition_matrix(gs, cap)?;
    let n = p.dim();
    let probes: Vec<Vec<f64>> = probe_sites.iter().map(|&j| observable_vector(gs, j, n)).collect();
    let mut u = observable_vector(gs, source, n);
    let mut vals = vec![Vec::with_capacity(times.len()); probe_sites.len()];
    let mut t = 0u64;
    let mut buf = vec![0.0; n];
    for &target in times {
        while t < target {
            p.matvec_into(&u, &mut buf);
            std::mem::swap(&mut u, &mut buf);
            t += 1;
        }
        for (k, o) in probes.iter().enumerate() {
            vals[k].push(o.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() / n as f64);
        }
    }
    let meta = SeriesMeta {
        model: gs.model.to_string(),
        l: gs.l,
        impurity: ImpuritySpec::describe(gs.impurity.as_ref()),
        samples: 0,
        seed: 0,
    };
    Ok(probe_sites
        .iter()
        .zip(vals)
        .map(|(&j, values)| {
            let mut s = CorrelationSeries::exact(times.iter().map(|&t| t as f64).collect(), values, j, meta.clone());
            s.source = source;
            s
        })
        .collect())
}

/// Exact autocorrelations `C(j, j; t)` with zero error bars.
pub fn markov_oracle(gs: &GateSet, probe_sites: &[usize], times: &[u64], cap: u128) -> Result<Vec<CorrelationSeries>> {
    let mut out = Vec::with_capacity(probe_sites.len());
    if probe_sites.iter().any(|&j| j == 0 || j > gs.l) {
        return Err(validation("probe_sites", format!("sites must lie in [1, {}]", gs.l)));
    }
    let p = transition_matrix(gs, cap)?;
    let n = p.dim();
    for &j in probe_sites {
        let o = observable_vector(gs, j, n);
        let mut u = o.clone();
        let mut buf = vec![0.0; n];
        let mut values = Vec::with_capacity(times.len());
        let mut t = 0u64;
        for &target in times {
            while t < target {
                p.matvec_into(&u, &mut buf);
                std::mem::swap(&mut u, &mut buf);
                t += 1;
            }
            values.push(o.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() / n as f64);
        }
        let meta = SeriesMeta {
            model: gs.model.to_string(),
            l: gs.l,
            impurity: ImpuritySpec::describe(gs.impurity.as_ref()),
            samples: 0,
            seed: 0,
        };
        out.push(CorrelationSeries::exact(times.iter().map(|&t| t as f64).collect(), values, j, meta));
    }
    Ok(out)
}
