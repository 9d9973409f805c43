//! Real symmetric banded matrices.

use nalgebra::DMatrix;

use super::tridiag::{tql_eigen, TrackedRows};
use super::{dense_eigen, EigenDecomposition};
use crate::error::{Error, Result};

/// Symmetric matrix with `b` stored super-diagonals.  With `periodic`
/// set, entry `(i, (i+d) mod n)` is stored in band `d`, which houses
/// circulant-banded operators (ring geometries).
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    n: usize,
    b: usize,
    periodic: bool,
    /// `bands[d][i] = A[i][i+d]`
    bands: Vec<Vec<f64>>,
}

impl BandedOperator {
    pub fn new(n: usize, b: usize) -> Self {
        Self { n, b, periodic: false, bands: vec![vec![0.0; n]; b + 1] }
    }

    /// Ring geometry; requires `n > 2b` so wrapped entries are unambiguous.
    pub fn periodic(n: usize, b: usize) -> Self {
        assert!(n > 2 * b, "periodic band needs n > 2b");
        Self { n, b, periodic: true, bands: vec![vec![0.0; n]; b + 1] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    fn slot(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        if hi - lo <= self.b {
            return Some((hi - lo, lo));
        }
        if self.periodic && lo + self.n - hi <= self.b {
            return Some((lo + self.n - hi, hi));
        }
        None
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |(d, r)| self.bands[d][r])
    }

    /// Adds `v` to `A[i][j]` (and symmetrically `A[j][i]`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (d, r) = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i},{j}) outside bandwidth {}", self.b));
        self.bands[d][r] += v;
    }

    /// Adds `w * c c^T` supported on `idx` (all within the band).
    pub fn add_rank_one(&mut self, idx: &[usize], coeff: &[f64], w: f64) {
        for a in 0..idx.len() {
            for c in a..idx.len() {
                self.add(idx[a], idx[c], w * coeff[a] * coeff[c]);
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] += self.bands[0][i] * x[i];
        }
        for d in 1..=self.b {
            let band = &self.bands[d];
            for i in 0..n {
                let j = i + d;
                let j = if j < n {
                    j
                } else if self.periodic {
                    j - n
                } else {
                    break;
                };
                let a = band[i];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
        }
        y
    }

    /// Max absolute row sum, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for i in 0..self.n {
            rows[i] += self.bands[0][i].abs();
        }
        for d in 1..=self.b {
            for i in 0..self.n {
                let j = i + d;
                let j = if j < self.n {
                    j
                } else if self.periodic {
                    j - self.n
                } else {
                    break;
                };
                rows[i] += self.bands[d][i].abs();
                rows[j] += self.bands[d][i].abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j);
            }
        }
        m
    }

    /// Givens bulge-chasing reduction to tridiagonal form.  Returns the
    /// diagonal and off-diagonal; `tracked` rows are multiplied by the
    /// accumulated orthogonal factor Q (with A = Q T Q^T).
    pub fn tridiagonalize(&self, tracked: &mut TrackedRows) -> (Vec<f64>, Vec<f64>) {
        assert!(!self.periodic, "ring operators are diagonalised densely");
        let n = self.n;
        let b = self.b;
        if b <= 1 || n < 3 {
            let diag = self.bands[0].clone();
            let off = if b == 0 { vec![0.0; n.saturating_sub(1)] } else { self.bands[1][..n - 1].to_vec() };
            return (diag, off);
        }
        let mut work = LowerBand::from_operator(self);
        for j in 0..n - 2 {
            for d in (2..=b).rev() {
                let r = j + d;
                if r >= n {
                    continue;
                }
                if work.get(r, j) == 0.0 {
                    continue;
                }
                work.annihilate(r - 1, r, j, tracked);
                let mut q = r;
                loop {
                    let row = q + b;
                    if row >= n {
                        break;
                    }
                    let col = q - 1;
                    if work.get(row, col) == 0.0 {
                        break;
                    }
                    work.annihilate(row - 1, row, col, tracked);
                    q = row;
                }
            }
        }
        let diag = (0..n).map(|i| work.get(i, i)).collect();
        let off = (0..n - 1).map(|i| work.get(i + 1, i)).collect();
        (diag, off)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.periodic || self.n <= 64 {
            return Ok(dense_eigen(&self.to_dense())?.energies);
        }
        let mut none = TrackedRows::empty(self.n);
        let (d, e) = self.tridiagonalize(&mut none);
        tql_eigen(&d, &e, &mut none)
    }

    /// Eigenvalues plus `R * Z` for the given tracked rows, without
    /// forming the eigenvectors.
    pub fn eigen_tracked(&self, mut tracked: TrackedRows) -> Result<(Vec<f64>, TrackedRows)> {
        if self.periodic {
            let full = dense_eigen(&self.to_dense())?;
            let n = self.n;
            let mut out = TrackedRows::empty(n);
            for r in 0..tracked.rows {
                let row = tracked.row(r);
                let proj: Vec<f64> = (0..n)
                    .map(|a| (0..n).map(|i| row[i] * full.orbitals[a][i]).sum())
                    .collect();
                out.push(&proj);
            }
            return Ok((full.energies, out));
        }
        let (d, e) = self.tridiagonalize(&mut tracked);
        let ev = tql_eigen(&d, &e, &mut tracked)?;
        Ok((ev, tracked))
    }

    /// Full eigendecomposition.
    pub fn eigen(&self) -> Result<EigenDecomposition> {
        let n = self.n;
        if self.periodic || n <= 400 {
            let dec = dense_eigen(&self.to_dense())?;
            return Ok(dec);
        }
        let (energies, rows) = self.eigen_tracked(TrackedRows::identity(n))?;
        let orbitals = (0..n).map(|a| (0..n).map(|i| rows.row(i)[a]).collect()).collect();
        let dec = EigenDecomposition { energies, orbitals };
        dec.check_residuals(|x| self.matvec(x), self.norm_bound(), 1e-8)?;
        Ok(dec)
    }

    /// The `count` lowest eigenpairs: eigenvalues from the tridiagonal
    /// reduction, vectors by shifted inverse iteration.
    pub fn lowest(&self, count: usize) -> Result<EigenDecomposition> {
        let n = self.n;
        let count = count.min(n);
        if self.periodic || n <= 400 {
            let mut dec = dense_eigen(&self.to_dense())?;
            dec.energies.truncate(count);
            dec.orbitals.truncate(count);
            return Ok(dec);
        }
        let ev = self.eigenvalues()?;
        let norm = self.norm_bound();
        let mut orbitals: Vec<Vec<f64>> = Vec::with_capacity(count);
        for a in 0..count {
            let lu = BandLu::factor(self, ev[a], norm)?;
            let mut x: Vec<f64> = (0..n)
                .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895 * (a as f64 + 1.0)).sin())
                .collect();
            for _ in 0..4 {
                x = lu.solve(&x);
                for (c, prev) in orbitals.iter().enumerate() {
                    if (ev[c] - ev[a]).abs() <= 1e-6 * norm.max(1.0) {
                        let p = dot(prev, &x);
                        for i in 0..n {
                            x[i] -= p * prev[i];
                        }
                    }
                }
                let nx = dot(&x, &x).sqrt();
                for v in x.iter_mut() {
                    *v /= nx;
                }
            }
            orbitals.push(x);
        }
        let dec = EigenDecomposition { energies: ev[..count].to_vec(), orbitals };
        dec.check_residuals(|x| self.matvec(x), norm, 1e-8)?;
        Ok(dec)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-band working copy with one extra diagonal for the bulge.
struct LowerBand {
    n: usize,
    w: usize,
    data: Vec<f64>,
}

impl LowerBand {
    fn from_operator(op: &BandedOperator) -> Self {
        let n = op.n;
        let w = op.b + 1;
        let mut data = vec![0.0; n * (w + 1)];
        for d in 0..=op.b {
            for i in d..n {
                data[i * (w + 1) + d] = op.bands[d][i - d];
            }
        }
        Self { n, w, data }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        (d <= self.w).then(|| hi * (self.w + 1) + d)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        match self.idx(i, j) {
            Some(k) => self.data[k] = v,
            None => debug_assert!(v == 0.0, "fill outside working band at ({i},{j})"),
        }
    }

    /// Rotates plane (p, q = p+1) so that A[q][col] becomes zero.
    fn annihilate(&mut self, p: usize, q: usize, col: usize, tracked: &mut TrackedRows) {
        let a = self.get(p, col);
        let bq = self.get(q, col);
        let r = a.hypot(bq);
        let c = a / r;
        let s = bq / r;
        let lo = q.saturating_sub(self.w);
        let hi = (p + self.w).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let apk = self.get(p, k);
            let aqk = self.get(q, k);
            if apk == 0.0 && aqk == 0.0 {
                continue;
            }
            self.set(p, k, c * apk + s * aqk);
            self.set(q, k, -s * apk + c * aqk);
        }
        let app = self.get(p, p);
        let aqq = self.get(q, q);
        let apq = self.get(p, q);
        self.set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
        self.set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
        self.set(p, q, c * s * (aqq - app) + (c * c - s * s) * apq);
        self.set(q, col, 0.0);
        tracked.rotate(p, q, c, s);
    }
}

/// LU factorisation with partial pivoting of `A - shift I` in
/// column-oriented band storage (upper bandwidth grows to 2b).
struct BandLu {
    n: usize,
    b: usize,
    w: usize,
    ab: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn factor(op: &BandedOperator, shift: f64, norm: f64) -> Result<Self> {
        let n = op.n;
        let b = op.b;
        let w = 3 * b + 1;
        let mut lu = Self { n, b, w, ab: vec![0.0; n * w], piv: vec![0; n] };
        for j in 0..n {
            for i in j.saturating_sub(b)..(j + b + 1).min(n) {
                let v = op.get(i, j) - if i == j { shift } else { 0.0 };
                lu.set(i, j, v);
            }
        }
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        for k in 0..n {
            let last = (k + b).min(n - 1);
            let mut p = k;
            for i in k + 1..=last {
                if lu.get(i, k).abs() > lu.get(p, k).abs() {
                    p = i;
                }
            }
            lu.piv[k] = p;
            let jmax = (k + 2 * b).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let t = lu.get(k, j);
                    lu.set(k, j, lu.get(p, j));
                    lu.set(p, j, t);
                }
            }
            if lu.get(k, k).abs() < tiny {
                lu.set(k, k, tiny);
            }
            let pivot = lu.get(k, k);
            for i in k + 1..=last {
                let l = lu.get(i, k) / pivot;
                lu.set(i, k, l);
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        let v = lu.get(i, j) - l * lu.get(k, j);
                        lu.set(i, j, v);
                    }
                }
            }
        }
        if lu.ab.iter().any(|v| !v.is_finite()) {
            return Err(Error::EigFailure("non-finite entry in shifted band factorisation".into()));
        }
        Ok(lu)
    }

    #[inline]
    fn pos(&self, i: usize, j: usize) -> usize {
        j * self.w + (i + 2 * self.b - j)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        if i + 2 * self.b < j || i > j + self.b {
            return 0.0;
        }
        self.ab[self.pos(i, j)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let p = self.pos(i, j);
        self.ab[p] = v;
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let b = self.b;
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + b).min(n - 1) {
                x[i] -= self.get(i, k) * xk;
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + 2 * b).min(n - 1) {
                s -= self.get(i, j) * x[j];
            }
            x[i] = s / self.get(i, i);
        }
        x
    }
}
