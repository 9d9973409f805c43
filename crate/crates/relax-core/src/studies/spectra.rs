use nalgebra::{DMatrix, DVector};

use super::Measurement;
use crate::automaton::{build_gate_set, enumerate_krylov, ImpurityKind, ImpuritySpec, ModelId, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::series::scaling_exponent;
use crate::superham::{
    build_effective_hk, build_super_hamiltonian, effective_correlation_tjz, graph_laplacian_tjz, hk_ground_energy,
    identity_state, kernel_dimension, low_spectrum, parent_h0, super_gap, two_impurity_effective, EffectiveSpectrum,
    SliomProbe, SliomState, TwoImpurityModel, DEFAULT_SUPER_CAP,
};

fn resample(sites: &[usize]) -> ImpuritySpec {
    ImpuritySpec::new(ImpurityKind::Resample, sites)
}

fn exact_gap(model: ModelId, l: usize, sites: &[usize]) -> Result<f64> {
    super_gap(&build_super_hamiltonian(model, l, Some(&resample(sites)), 1.0, DEFAULT_SUPER_CAP)?)
}

fn squared_overlap(a: &[f64], b: &[f64]) -> f64 {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    ab * ab / (aa * bb)
}

pub fn tjz_fragmentation() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    for l in 2..=10usize {
        let want = (1usize << (l + 1)) - 1;
        let gs = build_gate_set(ModelId::TJz, l, None)?;
        let got = enumerate_krylov(&gs, DEFAULT_STATE_CAP)?.subspace_count;
        m.push(Measurement::new(format!("Krylov count L={l}"), got as f64, format!("== {want}"), got == want));
        if l <= 6 {
            let op = build_super_hamiltonian(ModelId::TJz, l, None, 0.0, DEFAULT_SUPER_CAP)?;
            let k = kernel_dimension(&op)?;
            m.push(Measurement::new(format!("kernel dimension L={l}"), k as f64, format!("== {want}"), k == want));
        }
    }
    Ok(m)
}

/// Normalised ground state of `H_1` and `|q_1)` on `l = 1..=L`.
fn h1_ground_and_sliom(l: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let dec = build_effective_hk(l, 1)?.eigen()?;
    let q = SliomState::tjz(l, 1)?.coefficients[1..].to_vec();
    Ok((dec.orbitals[0].clone(), q))
}

/// Squared overlaps of the `H_1` ground state with `|q_1)` for each size.
pub fn sliom_convergence(sizes: &[usize]) -> Result<Vec<f64>> {
    sizes
        .iter()
        .map(|&l| {
            let (g, q) = h1_ground_and_sliom(l)?;
            Ok(squared_overlap(&g, &q))
        })
        .collect()
}

pub fn tjz_gap_and_overlap() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    let sizes: Vec<usize> = (4..=8).collect();
    for &l in &sizes {
        let bound = 3.0 / (3f64.powi(l as i32) - 1.0);
        m.push(Measurement::at_most(format!("exact gap L={l}"), exact_gap(ModelId::TJz, l, &[l])?, bound));
    }
    let ov = sliom_convergence(&sizes)?;
    m.push(Measurement::flag("H_1 ground-state overlap with q_left increases with L", ov.windows(2).all(|w| w[1] > w[0])));
    m.push(Measurement::at_least("H_1 ground-state overlap with q_left, L=8", *ov.last().unwrap(), 0.9));
    // Same check on the composite space: the exact first excited state
    // against the embedded H_1 ground state.
    let l = 8;
    let op = build_super_hamiltonian(ModelId::TJz, l, Some(&resample(&[l])), 1.0, DEFAULT_SUPER_CAP)?;
    let first = low_spectrum(&op, 1, &[identity_state(op.dim())])?.orbitals.remove(0);
    let (g, _) = h1_ground_and_sliom(l)?;
    let mut coefficients = vec![0.0];
    coefficients.extend(g);
    let embedded = SliomState { l, probe: SliomProbe::TJz { k: 1, j_s: l }, coefficients }.embedded()?;
    m.push(Measurement::at_least("exact first excited state overlap with embedded H_1 ground state, L=8", squared_overlap(&first, &embedded), 0.9));
    Ok(m)
}

/// Time at which `spec` falls to `1/e` of the summed lowest-mode weights
/// of its sectors (the long-lived plateau), by bisection in `ln t`.
pub fn plateau_decay_time(spec: &EffectiveSpectrum) -> (f64, f64) {
    let plateau: f64 = (1..=spec.j).filter_map(|k| spec.lowest_of(k)).map(|x| x.1).sum();
    let target = plateau / std::f64::consts::E;
    let (mut lo, mut hi) = (1e-3f64, 1.0f64);
    while spec.value_at(hi) > target && hi < 1e300 {
        lo = hi;
        hi *= 10.0;
    }
    for _ in 0..100 {
        let mid = (lo * hi).sqrt();
        if spec.value_at(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (plateau, hi)
}

/// Decay times of the bulk autocorrelation at distance `d = L - j` from
/// the impurity.
pub fn bulk_decay_times(l: usize, distances: &[usize]) -> Result<Vec<f64>> {
    distances
        .iter()
        .map(|&d| Ok(plateau_decay_time(&EffectiveSpectrum::new(l, l - d)?).1))
        .collect()
}

/// Least-squares `y = a + b x + c x^2`.
fn quadratic_fit(x: &[f64], y: &[f64]) -> Result<[f64; 3]> {
    let a = DMatrix::from_fn(x.len(), 3, |i, k| x[i].powi(k as i32));
    let sol = a
        .svd(true, true)
        .solve(&DVector::from_column_slice(y), 1e-14)
        .map_err(|e| Error::EigFailure(e.to_string()))?;
    Ok([sol[0], sol[1], sol[2]])
}

pub fn tjz_plateaus() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    for l in [10usize, 15, 20] {
        let start = effective_correlation_tjz(l, 1, &[0.0])?.values[0];
        let want = 2.0 * (2.0 * l as f64 + 1.0) / (9.0 * l as f64);
        m.push(Measurement::within(format!("C_1(0), L={l}"), start, want, 1e-12));
    }
    let l = 20;
    let spec = EffectiveSpectrum::new(l, 1)?;
    let (lambda, weight) = spec.lowest_of(1).ok_or_else(|| Error::DomainError("empty spectrum".into()))?;
    let plateau = 4.0 / (9.0 * (1.0 - 3f64.powi(-(l as i32))));
    m.push(Measurement::within(format!("plateau, L={l}"), weight, plateau, 1e-6));
    let mid = effective_correlation_tjz(l, 1, &[1e-2 / lambda])?.values[0];
    m.push(Measurement::within(format!("C_1 at t = 0.01/lambda_0, L={l}"), mid, plateau * (-0.01f64).exp(), 1e-6));
    let (_, t) = plateau_decay_time(&spec);
    let ratio = t * lambda;
    m.push(Measurement::new(format!("t_decay * g lambda_0, L={l}"), ratio, "in [0.5, 2]", (0.5..=2.0).contains(&ratio)));
    let distances: Vec<usize> = (10..=30).step_by(2).collect();
    let times = bulk_decay_times(100, &distances)?;
    let x: Vec<f64> = distances.iter().map(|&d| d as f64).collect();
    let y: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let [_, _, c] = quadratic_fit(&x, &y)?;
    m.push(Measurement::new("curvature of ln t_decay in L-j, L=100", c, "> 0", c > 0.0));
    Ok(m)
}

pub fn h3_spectra() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    for l in 4..=8usize {
        let bound = 14.0 / (3f64.powi(l as i32) - 1.0);
        m.push(Measurement::at_most(format!("H3 exact gap L={l}"), exact_gap(ModelId::DipOneH3, l, &[l - 1, l])?, bound));
    }
    for l in 8..=12usize {
        let free = enumerate_krylov(&build_gate_set(ModelId::DipOneH3, l, None)?, DEFAULT_STATE_CAP)?.subspace_count;
        let one = enumerate_krylov(&build_gate_set(ModelId::DipOneH3, l, Some(&resample(&[l])))?, DEFAULT_STATE_CAP)?.subspace_count;
        m.push(Measurement::within(format!("one-site impurity Krylov ratio L={l}"), one as f64 / free as f64, 0.25, 0.05));
    }
    let sizes: Vec<usize> = (4..=8).collect();
    let gaps = sizes
        .iter()
        .map(|&l| exact_gap(ModelId::DipOneH3H4, l, &[l - 1, l]))
        .collect::<Result<Vec<f64>>>()?;
    let x: Vec<f64> = sizes.iter().map(|&l| l as f64).collect();
    m.push(Measurement::within("H3+H4 gap exponent in L", scaling_exponent(&x, &gaps), -4.0, 0.5));
    Ok(m)
}

pub fn graph_equivalence() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    for l in 1..=8usize {
        let g = graph_laplacian_tjz(l)?;
        let gap = g.gap()?;
        let eff = hk_ground_energy(l, 1)?;
        m.push(Measurement::at_most(format!("|graph gap - effective gap| L={l}"), (gap - eff).abs(), 1e-8));
        m.push(Measurement::at_most(format!("graph gap vs 2 phi, L={l}"), gap, g.cheeger_bound));
        if l >= 2 {
            m.push(Measurement::at_most(format!("graph gap vs 4/3^L, L={l}"), gap, 4.0 / 3f64.powi(l as i32)));
        }
    }
    Ok(m)
}

pub fn two_impurity() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    let sizes = [125usize, 250, 500, 1000, 2000];
    let gaps = sizes
        .iter()
        .map(|&l| Ok(two_impurity_effective(l, TwoImpurityModel::SliomHopping)?.gap))
        .collect::<Result<Vec<f64>>>()?;
    let x: Vec<f64> = sizes.iter().map(|&l| l as f64).collect();
    m.push(Measurement::within("SLIOM-hopping gap exponent in L", scaling_exponent(&x, &gaps), -2.0, 0.2));
    for l in 2..=8usize {
        let exact = exact_gap(ModelId::TJz, l, &[1, l])?;
        let full = two_impurity_effective(l, TwoImpurityModel::FullEff)?.gap;
        // The two coincide at L = 2; allow for eigensolver roundoff.
        m.push(Measurement::at_most(format!("exact two-impurity gap L={l} vs full_eff"), exact, full * (1.0 + 1e-9)));
    }
    Ok(m)
}

pub fn parent_spectrum() -> Result<Vec<Measurement>> {
    let mut worst: f64 = 0.0;
    let sizes: Vec<usize> = (1..=32).chain([50, 64, 100, 128, 200, 256, 300, 400, 500]).collect();
    for &l in &sizes {
        let p = parent_h0(l)?;
        let mut ev = p.operator.eigenvalues()?;
        let mut want = p.exact.clone();
        ev.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        worst = worst.max(ev.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    Ok(vec![Measurement::at_most("max |E - (3/4 - 3m'/2L)| over L <= 500", worst, 1e-10)])
}
