//! Single-flip hydro-mode operators and their spectral correlations.

use serde::{Deserialize, Serialize};

use crate::continuum::ModeFamily;
use crate::error::{validation, Error, Result};
use crate::linalg::{BandedOperator, TrackedRows};
use crate::series::{CorrelationSeries, SeriesMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

/// On-site impurity of strength `g` at 1-based site `site`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteImpurity {
    pub site: usize,
    pub g: f64,
}

/// U(1) hopping operator: hopping -8 on every bond, on-site 16 (8 on open
/// ends), plus `4g` at the impurity site.
pub fn build_u1(l: usize, bc: Boundary, impurity: Option<SiteImpurity>) -> Result<BandedOperator> {
    if l < 2 || (bc == Boundary::Periodic && l < 3) {
        return Err(validation("L", "need L >= 2 (L >= 3 on a ring)"));
    }
    let mut h = match bc {
        Boundary::Open => BandedOperator::new(l, 1),
        Boundary::Periodic => BandedOperator::periodic(l, 1),
    };
    let bonds = if bc == Boundary::Open { l - 1 } else { l };
    for i in 0..bonds {
        let j = (i + 1) % l;
        h.add_rank_one(&[i, j], &[1.0, -1.0], 8.0);
    }
    if let Some(imp) = impurity {
        if imp.site == 0 || imp.site > l || imp.g < 0.0 {
            return Err(validation("impurity", "site must lie in [1, L] and g >= 0"));
        }
        h.add(imp.site - 1, imp.site - 1, 4.0 * imp.g);
    }
    Ok(h)
}

/// Impurities of the spin-1/2 dipole model at the left edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DipoleImpurity {
    None,
    /// Swap of sites 1 and 2: `g (|1) - |2))((1| - (2|)`.
    ChargePreserving { g: f64 },
    /// Flips on sites 1, 2, 3: `4g (|1)(1| + |2)(2| + |3)(3|)`.
    FullBreaking { g: f64 },
}

/// Default couplings of the 4- and 5-site moves.
pub const J4_DEFAULT: f64 = 1.0;
pub const J5_DEFAULT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Lattice subdiffusion constant of [`build_dipole`] in the bulk.
pub fn dipole_lattice_d(j4: f64, j5: f64) -> f64 {
    4.0 * j4 + 9.0 * j5
}

/// Lattice diffusion constant of [`build_u1`].
pub const U1_LATTICE_D: f64 = 8.0;

/// Dipole-conserving single-flip operator (bandwidth 4): a rank-one term
/// `J4 v v^T` with `v = (1,-1,-1,1)` on every 4-site window and
/// `J5 w w^T` with `w = (1,-1,0,-1,1)` on every 5-site window.
pub fn build_dipole(l: usize, j4: f64, j5: f64, impurity: DipoleImpurity) -> Result<BandedOperator> {
    if l < 8 {
        return Err(Error::SpanError { l, span: 8 });
    }
    let mut h = BandedOperator::new(l, 4);
    for i in 0..=l - 4 {
        h.add_rank_one(&[i, i + 1, i + 2, i + 3], &[1.0, -1.0, -1.0, 1.0], j4);
    }
    for i in 0..=l - 5 {
        h.add_rank_one(&[i, i + 1, i + 3, i + 4], &[1.0, -1.0, -1.0, 1.0], j5);
    }
    match impurity {
        DipoleImpurity::None => {}
        DipoleImpurity::ChargePreserving { g } => h.add_rank_one(&[0, 1], &[1.0, -1.0], g),
        DipoleImpurity::FullBreaking { g } => {
            for s in 0..3 {
                h.add(s, s, 4.0 * g);
            }
        }
    }
    Ok(h)
}

/// `C(j, j0; t) = sum_a exp(-E_a t) phi_a(j) phi_a(j0)` for each 1-based
/// pair `(j, j0)`.  Only the probed eigenvector rows are accumulated.
pub fn spectral_correlation(h: &BandedOperator, pairs: &[(usize, usize)], times: &[f64]) -> Result<Vec<CorrelationSeries>> {
    let n = h.dim();
    if pairs.iter().any(|&(a, b)| a == 0 || b == 0 || a > n || b > n) {
        return Err(validation("probe_sites", format!("sites must lie in [1, {n}]")));
    }
    if times.iter().any(|&t| t < 0.0) {
        return Err(validation("times", "must be non-negative"));
    }
    let mut sites: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a - 1, b - 1]).collect();
    sites.sort_unstable();
    sites.dedup();
    let (energies, rows) = h.eigen_tracked(TrackedRows::units(n, &sites))?;
    check_psd(&energies, h.norm_bound())?;
    let row_of = |s: usize| rows.row(sites.binary_search(&s).unwrap());
    let meta = SeriesMeta { model: "hydro".into(), l: n, ..Default::default() };
    Ok(pairs
        .iter()
        .map(|&(j, j0)| {
            let (a, b) = (row_of(j - 1), row_of(j0 - 1));
            let values = times
                .iter()
                .map(|&t| energies.iter().zip(a.iter().zip(b)).map(|(e, (x, y))| (-e * t).exp() * x * y).sum())
                .collect();
            let mut s = CorrelationSeries::exact(times.to_vec(), values, j, meta.clone());
            s.source = j0;
            s
        })
        .collect())
}

fn check_psd(energies: &[f64], norm: f64) -> Result<()> {
    match energies.first() {
        Some(&e) if e < -1e-10 * norm => Err(Error::EigFailure(format!("negative eigenvalue {e:e}"))),
        _ => Ok(()),
    }
}

/// `sum_a exp(-E_a t) |sum_j phi_a(j)|^2`: total magnetisation from a
/// fully polarised state.
pub fn magnetization_from_modes(h: &BandedOperator, times: &[f64]) -> Result<CorrelationSeries> {
    let n = h.dim();
    let mut rows = TrackedRows::empty(n);
    rows.push(&vec![1.0; n]);
    let (energies, rows) = h.eigen_tracked(rows)?;
    check_psd(&energies, h.norm_bound())?;
    let w: Vec<f64> = rows.row(0).iter().map(|s| s * s).collect();
    let values = times
        .iter()
        .map(|&t| energies.iter().zip(&w).map(|(e, w)| (-e * t).exp() * w).sum())
        .collect();
    Ok(CorrelationSeries::exact(
        times.to_vec(),
        values,
        0,
        SeriesMeta { model: "hydro".into(), l: n, ..Default::default() },
    ))
}

/// Number of eigenvalues below `1e-9 * ||H||`.
pub fn zero_mode_count(h: &BandedOperator) -> Result<usize> {
    let tol = 1e-9 * h.norm_bound();
    Ok(h.eigenvalues()?.iter().filter(|&&e| e.abs() <= tol).count())
}

/// The `count` lowest modes after skipping the `zeros` conserved ones, each
/// with its energy; signs are fixed so the first component above `1e-8` is
/// positive.
pub fn lowest_nonzero_modes(h: &BandedOperator, zeros: usize, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let dec = h.lowest(zeros + count)?;
    Ok(dec
        .energies
        .into_iter()
        .zip(dec.orbitals)
        .skip(zeros)
        .map(|(e, mut v)| {
            if v.iter().find(|x| x.abs() > 1e-8).is_some_and(|&x| x < 0.0) {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            (e, v)
        })
        .collect())
}

/// Normalised overlap `|(a, b)| / (|a| |b|)` of lattice mode `phi` with
/// continuum mode `n` of `family`, sampled at `points` equispaced sites
/// (site `j` sits at `x = j - 1/2`).
pub fn continuum_overlap(phi: &[f64], family: &ModeFamily, n: usize, points: usize) -> f64 {
    let l = phi.len();
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for p in 0..points {
        let j = 1 + (p * (l - 1)) / (points - 1).max(1);
        let (a, b) = (phi[j - 1], family.eval(n, j as f64 - 0.5));
        ab += a * b;
        aa += a * a;
        bb += b * b;
    }
    ab.abs() / (aa * bb).sqrt()
}

/// `j,phi_1,phi_2,...` rows (1-based `j`) for the given modes.
pub fn eigenmode_table(modes: &[(f64, Vec<f64>)]) -> String {
    let mut out = String::from("j");
    for k in 1..=modes.len() {
        out.push_str(&format!(",phi_{k}"));
    }
    out.push('\n');
    let n = modes.first().map_or(0, |m| m.1.len());
    for j in 0..n {
        out.push_str(&(j + 1).to_string());
        for (_, v) in modes {
            out.push_str(&format!(",{:.17e}", v[j]));
        }
        out.push('\n');
    }
    out
}
