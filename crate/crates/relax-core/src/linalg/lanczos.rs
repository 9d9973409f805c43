//! Thick-restart Lanczos for the lowest eigenpairs of a symmetric operator.
//!
//! The basis `V` and its image `AV` are stored explicitly, so the
//! Rayleigh-Ritz step is exact and every new vector is fully
//! reorthogonalised.  After a restart the retained Ritz vectors are
//! extended by the common residual direction, which keeps the space a
//! Krylov space.

use nalgebra::DMatrix;

use super::banded::dot;
use super::{dense_eigen, EigenDecomposition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Basis size before a restart.
    pub max_basis: usize,
    /// Ritz vectors kept across a restart.
    pub keep: usize,
    /// Residual tolerance relative to the operator norm.
    pub tol: f64,
    pub max_restarts: usize,
    /// Dimensions up to this size are diagonalised densely.
    pub dense_limit: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { max_basis: 120, keep: 40, tol: 1e-9, max_restarts: 2000, dense_limit: 1500 }
    }
}

fn default_start(n: usize, salt: usize) -> Vec<f64> {
    let mut s: u64 = 0x9E37_79B9_7F4A_7C15 ^ (salt as u64).wrapping_mul(0xD1B5_4A32_D192_ED03);
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn orthogonalize(x: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for v in against {
            let p = dot(v, x);
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi -= p * vi;
            }
        }
    }
}

/// Removes components along `deflate` and `basis`; returns the
/// remaining norm relative to the input norm (the vector itself is
/// normalised when that ratio is not negligible).
fn project_out(x: &mut [f64], deflate: &[Vec<f64>], basis: &[Vec<f64>]) -> f64 {
    let n0 = dot(x, x).sqrt();
    if n0 == 0.0 || !n0.is_finite() {
        return 0.0;
    }
    for xi in x.iter_mut() {
        *xi /= n0;
    }
    orthogonalize(x, deflate);
    orthogonalize(x, basis);
    orthogonalize(x, deflate);
    let n1 = dot(x, x).sqrt();
    for xi in x.iter_mut() {
        *xi /= n1;
    }
    n1
}

/// The `nev` lowest eigenpairs of `apply` restricted to the orthogonal
/// complement of `deflate` (which must be orthonormal eigenvectors).
/// `norm` is an upper bound on the operator norm.
pub fn lowest_eigenpairs(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    n: usize,
    nev: usize,
    deflate: &[Vec<f64>],
    start: Option<&[f64]>,
    norm: f64,
    opts: LanczosOptions,
) -> Result<EigenDecomposition> {
    if n <= opts.dense_limit.max(opts.max_basis + deflate.len()) {
        return dense_lowest(apply, n, nev, deflate, norm);
    }
    let m = opts.max_basis;
    let keep = opts.keep.max(nev + 2).min(m - 2);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut image: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut next: Vec<f64> = start.map_or_else(|| default_start(n, 0), |s| s.to_vec());
    let mut worst = f64::INFINITY;
    for restart in 0..opts.max_restarts {
        let mut salt = 1;
        while basis.len() < m {
            let mut nrm = project_out(&mut next, deflate, &basis);
            while !(nrm > 1e-8) {
                next = default_start(n, restart * 1000 + salt);
                salt += 1;
                nrm = project_out(&mut next, deflate, &basis);
            }
            let w = apply(&next);
            basis.push(std::mem::take(&mut next));
            next = w.clone();
            image.push(w);
        }
        let k = basis.len();
        let mut h = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let v = 0.5 * (dot(&basis[a], &image[b]) + dot(&basis[b], &image[a]));
                h[(a, b)] = v;
                h[(b, a)] = v;
            }
        }
        let small = dense_eigen(&h)?;
        let mut ritz = Vec::with_capacity(keep);
        let mut ritz_img = Vec::with_capacity(keep);
        for i in 0..keep {
            let s = &small.orbitals[i];
            let mut y = vec![0.0; n];
            let mut ay = vec![0.0; n];
            for j in 0..k {
                let c = s[j];
                for t in 0..n {
                    y[t] += c * basis[j][t];
                    ay[t] += c * image[j][t];
                }
            }
            ritz.push(y);
            ritz_img.push(ay);
        }
        worst = 0.0;
        let mut first_bad = None;
        for i in 0..nev {
            let r: f64 = ritz_img[i]
                .iter()
                .zip(&ritz[i])
                .map(|(a, y)| (a - small.energies[i] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            if r > opts.tol * norm && first_bad.is_none() {
                first_bad = Some(i);
            }
            worst = worst.max(r);
        }
        match first_bad {
            None => {
                return Ok(EigenDecomposition {
                    energies: small.energies[..nev].to_vec(),
                    orbitals: ritz.into_iter().take(nev).collect(),
                })
            }
            Some(i) => {
                next = ritz_img[i].iter().zip(&ritz[i]).map(|(a, y)| a - small.energies[i] * y).collect();
                basis = ritz;
                image = ritz_img;
            }
        }
    }
    Err(Error::ConvergenceFailure { iterations: opts.max_restarts, residual: worst })
}

fn dense_lowest(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    n: usize,
    nev: usize,
    deflate: &[Vec<f64>],
    norm: f64,
) -> Result<EigenDecomposition> {
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = apply(&e);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
        e[j] = 0.0;
    }
    let lift = 2.0 * norm + 1.0;
    for d in deflate {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += lift * d[i] * d[j];
            }
        }
    }
    let m = 0.5 * (&m + m.transpose());
    let mut dec = dense_eigen(&m)?;
    dec.energies.truncate(nev);
    dec.orbitals.truncate(nev);
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_of_path_laplacian_with_deflation() {
        let n = 2000;
        let apply = |x: &[f64]| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let mut s = 0.0;
                    if i > 0 {
                        s += x[i] - x[i - 1];
                    }
                    if i + 1 < n {
                        s += x[i] - x[i + 1];
                    }
                    s
                })
                .collect()
        };
        let ones = vec![1.0 / (n as f64).sqrt(); n];
        let dec = lowest_eigenpairs(&apply, n, 2, &[ones], None, 4.0, LanczosOptions::default()).unwrap();
        for (a, e) in dec.energies.iter().enumerate() {
            let k = std::f64::consts::PI * (a + 1) as f64 / n as f64;
            let exact = 2.0 - 2.0 * k.cos();
            assert!((e - exact).abs() < 1e-10, "{e} vs {exact}");
        }
    }
}
