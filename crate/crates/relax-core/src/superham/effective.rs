use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sliom::binom;
use crate::error::{validation, Error, Result};
use crate::linalg::sparse::SparseBuilder;
use crate::linalg::{lowest_eigenpairs, LanczosOptions, SparseOperator, TridiagonalOperator};
use crate::series::{CorrelationSeries, SeriesMeta};

fn hk(l: usize, k: usize) -> TridiagonalOperator {
    let lf = l as f64;
    let diag = (k..=l)
        .map(|m| if m == k { 1.0 + k as f64 / (2.0 * lf) } else { 1.0 - m as f64 / (2.0 * lf) })
        .collect();
    let off = (k..l)
        .map(|m| -(((m + 1) * (l - m)) as f64).sqrt() / (std::f64::consts::SQRT_2 * lf))
        .collect();
    TridiagonalOperator { diag, off }
}

/// First-order effective operator of the state-flip impurity at site `L`
/// (unit strength) in the `|k,l)` sector, `l = k..=L`.
pub fn build_effective_hk(l: usize, k: usize) -> Result<TridiagonalOperator> {
    if k == 0 || k > l {
        return Err(validation("k", format!("need 1 <= k <= L = {l}")));
    }
    Ok(hk(l, k))
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Lowest eigenvalue of `H_k` to full relative precision: the exact
/// determinant (integer recurrence for `det(2L^2 H_k)`) divided by the product
/// of the remaining, well-conditioned eigenvalues.
pub fn hk_ground_energy(l: usize, k: usize) -> Result<f64> {
    let h = build_effective_hk(l, k)?;
    let ev = h.eigenvalues()?;
    if ev.len() == 1 {
        return Ok(ev[0]);
    }
    let s = 2 * l * l;
    let a = |m: usize| -> BigInt {
        if m == k {
            BigInt::from(s + k * l)
        } else {
            BigInt::from(s) - BigInt::from(m * l)
        }
    };
    let (mut prev, mut cur) = (BigInt::from(1), a(k));
    for m in k + 1..=l {
        let b = BigInt::from(s as u64) * BigInt::from((m * (l + 1 - m)) as u64);
        let next = a(m) * &cur - b * &prev;
        prev = cur;
        cur = next;
    }
    if cur <= BigInt::zero() {
        return Err(Error::EigFailure(format!("H_{k} at L={l} is not positive definite")));
    }
    let ln_det = ln_big(&cur) - ev.len() as f64 * (s as f64).ln();
    let ln_rest: f64 = ev[1..].iter().map(|e| e.ln()).sum();
    Ok((ln_det - ln_rest).exp())
}

/// Weights `|(S^z_j | k, l)|^2 / 3^L` of the single-flip states.
fn overlap_weights(l: usize, j: usize, k: usize) -> (Vec<f64>, BigRational) {
    let three_l = BigUint::from(3u32).pow(l as u32);
    let ck = binom(j - 1, k - 1);
    let mut exact = BigRational::zero();
    let w = (k..=l)
        .map(|m| {
            let c = &ck * binom(l - j, m - k);
            let num = BigUint::from(2u32).pow(m as u32) * &c * &c;
            let r = BigRational::new(BigInt::from(num), BigInt::from(binom(l, m) * &three_l));
            let v = r.to_f64().unwrap();
            exact += r;
            v
        })
        .collect();
    (w, exact)
}

/// Modes `(energy, weight)` of the effective autocorrelation of `S^z_j`
/// for the unit-strength impurity at site `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveSpectrum {
    pub l: usize,
    pub j: usize,
    /// `(sector k, energy, weight)`.
    pub modes: Vec<(usize, f64, f64)>,
}

impl EffectiveSpectrum {
    pub fn new(l: usize, j: usize) -> Result<Self> {
        if j == 0 || j > l {
            return Err(validation("j", format!("need 1 <= j <= L = {l}")));
        }
        let mut modes = Vec::new();
        let mut total = 0.0;
        let mut exact = BigRational::zero();
        for k in 1..=j {
            let (w, ex) = overlap_weights(l, j, k);
            exact += ex;
            total += w.iter().sum::<f64>();
            let o: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
            let (mut energies, proj) = hk(l, k).eigen_projections(&[o])?;
            energies[0] = hk_ground_energy(l, k)?;
            for (e, p) in energies.into_iter().zip(&proj[0]) {
                modes.push((k, e, p * p));
            }
        }
        let expected = exact.to_f64().unwrap();
        let captured: f64 = modes.iter().map(|m| m.2).sum();
        if (total - expected).abs() > 1e-10 * expected || (captured - expected).abs() > 1e-10 * expected {
            return Err(Error::OverlapError { got: captured, expected });
        }
        Ok(Self { l, j, modes })
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.modes.iter().map(|&(_, e, w)| (-e * t).exp() * w).sum()
    }

    /// Weight of modes with energy below `cut`.
    pub fn weight_below(&self, cut: f64) -> f64 {
        self.modes.iter().filter(|m| m.1 < cut).map(|m| m.2).sum()
    }

    /// Weight and energy of the lowest mode of sector `k`.
    pub fn lowest_of(&self, k: usize) -> Option<(f64, f64)> {
        self.modes
            .iter()
            .filter(|m| m.0 == k)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|m| (m.1, m.2))
    }
}

/// `C^eff_j(t) = 3^{-L} sum_{k<=j} sum_n e^{-E_n^{(k)} t} |(S^z_j|lambda_n^{(k)})|^2`.
pub fn effective_correlation_tjz(l: usize, j: usize, times: &[f64]) -> Result<CorrelationSeries> {
    let spec = EffectiveSpectrum::new(l, j)?;
    let values = times.iter().map(|&t| spec.value_at(t)).collect();
    Ok(CorrelationSeries::exact(
        times.to_vec(),
        values,
        j,
        SeriesMeta { model: "TJz_effective".into(), l, impurity: format!("resample@{l}"), ..Default::default() },
    ))
}

/// The zero-charge sector operator on `l = 0..=L` and its closed-form
/// spectrum `3i/(2L)`, `i = 0..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParentSpectrum {
    pub operator: TridiagonalOperator,
    pub exact: Vec<f64>,
}

pub fn parent_h0(l: usize) -> Result<ParentSpectrum> {
    if l == 0 {
        return Err(validation("L", "need L >= 1"));
    }
    let exact = (0..=l).map(|i| 0.75 - 1.5 * (l as f64 / 2.0 - i as f64) / l as f64).collect();
    Ok(ParentSpectrum { operator: hk(l, 0), exact })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoImpurityModel {
    /// Both impurities projected onto every `|k,l)`, `1 <= k <= l <= L`.
    FullEff,
    /// Both impurities projected onto the normalised SLIOMs `|q_k)`.
    SliomHopping,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TwoImpurityOperator {
    Sparse(SparseOperator),
    Tridiagonal(TridiagonalOperator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoImpurityResult {
    pub model: TwoImpurityModel,
    pub operator: TwoImpurityOperator,
    pub gap: f64,
}

/// Index of `|k,l)` in the lexicographic `(k, l)` basis.
fn kl_index(l: usize, k: usize, m: usize) -> usize {
    (k - 1) * (l + 1) - (k - 1) * k / 2 + (m - k)
}

fn full_eff(l: usize) -> SparseOperator {
    let lf = l as f64;
    let n = l * (l + 1) / 2;
    let mut b = SparseBuilder::new(n);
    for k in 1..=l {
        for m in k..=l {
            let i = kl_index(l, k, m);
            let right = if m == k { 1.0 + k as f64 / (2.0 * lf) } else { 1.0 - m as f64 / (2.0 * lf) };
            let left = if k == 1 { 1.0 + m as f64 / (2.0 * lf) } else { 1.0 - m as f64 / (2.0 * lf) };
            b.add(i, i, right + left);
            if m < l {
                let t = (((m + 1) * (l - m)) as f64).sqrt() / (std::f64::consts::SQRT_2 * lf);
                b.add_sym(i, kl_index(l, k, m + 1), -t);
            }
            if k >= 2 {
                let t = ((m * (l + 1 - m)) as f64).sqrt() / (std::f64::consts::SQRT_2 * lf);
                b.add_sym(i, kl_index(l, k - 1, m - 1), -t);
            }
        }
    }
    b.build()
}

/// `ln(2^m C(L,m))` up to a constant, by the ratio recurrence.
fn log_pattern_weights(l: usize) -> Vec<f64> {
    let mut lw = vec![0.0; l + 1];
    for m in 0..l {
        lw[m + 1] = lw[m] + (2.0 * (l - m) as f64 / (m + 1) as f64).ln();
    }
    lw
}

fn sliom_hopping(l: usize) -> TridiagonalOperator {
    let lf = l as f64;
    let lw = log_pattern_weights(l);
    let peak = (2 * l) / 3;
    // Sums over m >= k are taken relative to their largest term.
    let shift: Vec<f64> = (0..=l).map(|k| lw[k.max(peak)]).collect();
    let mut diag = Vec::with_capacity(l);
    let mut hops = Vec::with_capacity(l);
    let mut norms = Vec::with_capacity(l);
    for k in 1..=l {
        let (mut v1, mut vl, mut hop, mut norm) = (0.0, 0.0, 0.0, 0.0);
        for m in k..=l {
            let w = (lw[m] - shift[k]).exp();
            let x = m as f64 / (2.0 * lf);
            norm += w;
            v1 += w * if k == 1 { 1.0 + x } else { 1.0 - x };
            vl += w * if m == k { 1.0 + k as f64 / (2.0 * lf) } else { 1.0 - x };
            if m < l {
                let c = w * (l - m) as f64 / lf;
                vl -= 2.0 * c;
                hop += c;
            }
        }
        diag.push((v1 + vl) / norm);
        hops.push(hop);
        norms.push(norm);
    }
    let off = (1..l)
        .map(|k| -hops[k - 1] * (0.5 * (shift[k] - shift[k + 1])).exp() / (norms[k - 1] * norms[k]).sqrt())
        .collect();
    TridiagonalOperator { diag, off }
}

/// Effective operator of state-flip impurities (unit strength) at both
/// ends of the t-Jz chain, with its lowest eigenvalue.
pub fn two_impurity_effective(l: usize, model: TwoImpurityModel) -> Result<TwoImpurityResult> {
    if l < 2 {
        return Err(validation("L", "need L >= 2"));
    }
    match model {
        TwoImpurityModel::FullEff => {
            let n = l * (l + 1) / 2;
            if n > 4_000_000 {
                return Err(Error::SizeError { size: n as u128, cap: 4_000_000 });
            }
            let op = full_eff(l);
            let dec = lowest_eigenpairs(&|x| op.matvec(x), n, 1, &[], None, op.norm_bound(), LanczosOptions::default())?;
            Ok(TwoImpurityResult { model, gap: dec.energies[0], operator: TwoImpurityOperator::Sparse(op) })
        }
        TwoImpurityModel::SliomHopping => {
            let op = sliom_hopping(l);
            let gap = op.eigenvalues()?[0];
            Ok(TwoImpurityResult { model, gap, operator: TwoImpurityOperator::Tridiagonal(op) })
        }
    }
}

/// First-order splitting `2g (1 - 2M/L)` of the U(1) ferromagnetic
/// multiplet, `M = L/2, L/2 - 1, ..., -L/2`.
pub fn naive_u1_splitting(l: usize, g: f64) -> Result<Vec<f64>> {
    if l < 2 {
        return Err(validation("L", "need L >= 2"));
    }
    let lf = l as f64;
    Ok((0..=l).map(|i| 2.0 * g * (1.0 - 2.0 * (lf / 2.0 - i as f64) / lf)).collect())
}
