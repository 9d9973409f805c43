//! Compressed-row symmetric sparse matrices.

use nalgebra::DMatrix;
use rayon::prelude::*;

/// Symmetric sparse operator in CSR form (both triangles stored).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Accumulates triplets; duplicates are summed on build.
#[derive(Debug, Clone, Default)]
pub struct SparseBuilder {
    n: usize,
    trip: Vec<(usize, usize, f64)>,
}

impl SparseBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, trip: Vec::new() }
    }

    /// Adds `v` at (i, j) only.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.trip.push((i, j, v));
    }

    /// Adds `v` at (i, j) and, when off-diagonal, at (j, i).
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self.trip.push((i, j, v));
        if i != j {
            self.trip.push((j, i, v));
        }
    }

    /// Adds `w (|a> - |b>)(<a| - <b|)`.
    pub fn add_pair(&mut self, a: usize, b: usize, w: f64) {
        if a == b {
            return;
        }
        self.add_sym(a, a, w);
        self.add_sym(b, b, w);
        self.add_sym(a, b, -w);
    }

    pub fn build(mut self) -> SparseOperator {
        self.trip.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut cols = Vec::with_capacity(self.trip.len());
        let mut vals: Vec<f64> = Vec::with_capacity(self.trip.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in self.trip {
            if last == Some((i, j)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseOperator { n: self.n, row_ptr, cols, vals }
    }
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    /// Row `i` as (column, value) pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// Row-parallel product; each row sum is computed sequentially so the
    /// result is independent of the thread count.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        let body = |(i, yi): (usize, &mut f64)| {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *yi = s;
        };
        if self.n >= 1 << 14 {
            y.par_iter_mut().enumerate().for_each(body);
        } else {
            y.iter_mut().enumerate().for_each(body);
        }
    }

    pub fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| (self.get(j, i) - v).abs() <= tol))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Restriction `B^T A B` onto the span of the given orthonormal columns.
    pub fn project(&self, basis: &[Vec<f64>]) -> DMatrix<f64> {
        let k = basis.len();
        let ab: Vec<Vec<f64>> = basis.iter().map(|v| self.matvec(v)).collect();
        let mut m = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] = super::banded::dot(&basis[a], &ab[b]);
            }
        }
        m
    }
}
