//! Symmetric tridiagonal eigenproblem by implicit QL with tracked rows.
//!
//! Instead of accumulating the full eigenvector matrix, the caller passes
//! a set of row vectors `R` (each of length n).  On return `R` holds
//! `R * Z` where `Z` has the eigenvectors as columns.  Passing unit rows
//! yields selected eigenvector components; passing the identity yields
//! all eigenvectors; passing the all-ones row yields column sums.

use crate::error::{Error, Result};

/// Row-major block of `rows` vectors of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedRows {
    pub n: usize,
    pub rows: usize,
    pub data: Vec<f64>,
}

impl TrackedRows {
    pub fn empty(n: usize) -> Self {
        Self { n, rows: 0, data: Vec::new() }
    }

    /// Unit rows selecting the given (0-based) coordinates.
    pub fn units(n: usize, idx: &[usize]) -> Self {
        let mut data = vec![0.0; n * idx.len()];
        for (r, &i) in idx.iter().enumerate() {
            data[r * n + i] = 1.0;
        }
        Self { n, rows: idx.len(), data }
    }

    pub fn identity(n: usize) -> Self {
        let idx: Vec<usize> = (0..n).collect();
        Self::units(n, &idx)
    }

    pub fn push(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.n);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    /// Applies the plane rotation on columns (p, q):
    /// `x_p <- c x_p + s x_q`, `x_q <- -s x_p + c x_q`.
    #[inline]
    pub fn rotate(&mut self, p: usize, q: usize, c: f64, s: f64) {
        let n = self.n;
        for r in 0..self.rows {
            let base = r * n;
            let xp = self.data[base + p];
            let xq = self.data[base + q];
            self.data[base + p] = c * xp + s * xq;
            self.data[base + q] = -s * xp + c * xq;
        }
    }

    fn permute_columns(&mut self, perm: &[usize]) {
        let n = self.n;
        let mut tmp = vec![0.0; n];
        for r in 0..self.rows {
            let row = &mut self.data[r * n..(r + 1) * n];
            for (k, &p) in perm.iter().enumerate() {
                tmp[k] = row[p];
            }
            row.copy_from_slice(&tmp);
        }
    }
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (`off[i]` couples i and i+1).
/// `tracked` is transformed as described in the module docs and its
/// columns are permuted along with the sorted eigenvalues.
pub fn tql_eigen(diag: &[f64], off: &[f64], tracked: &mut TrackedRows) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_eq!(off.len() + 1, n);
    assert_eq!(tracked.n, n);
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::EigFailure(format!(
                        "QL iteration stalled at index {l} (|e|={:e})",
                        e[l].abs()
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    // column update V[:, i], V[:, i+1]
                    tracked.rotate(i + 1, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted: Vec<f64> = perm.iter().map(|&i| d[i]).collect();
    tracked.permute_columns(&perm);
    Ok(sorted)
}
