//! Eigensolvers for the banded, tridiagonal and sparse symmetric operators.

pub mod banded;
pub mod lanczos;
pub mod sparse;
pub mod tridiag;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use banded::BandedOperator;
pub use lanczos::{lowest_eigenpairs, LanczosOptions};
pub use sparse::SparseOperator;
pub use tridiag::{tql_eigen, TrackedRows};

/// Ascending energies with orthonormal orbitals (`orbitals[a]` is the
/// vector for `energies[a]`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub energies: Vec<f64>,
    pub orbitals: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    /// Fails with `EigFailure` if any residual exceeds `tol * norm`.
    pub fn check_residuals(&self, apply: impl Fn(&[f64]) -> Vec<f64>, norm: f64, tol: f64) -> Result<()> {
        let mut worst: f64 = 0.0;
        for (e, v) in self.energies.iter().zip(&self.orbitals) {
            let hv = apply(v);
            let r: f64 = hv.iter().zip(v).map(|(h, x)| (h - e * x).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        if worst > tol * norm.max(1.0) {
            return Err(Error::EigFailure(format!("residual {worst:e} exceeds {tol:e} x {norm:e}")));
        }
        Ok(())
    }
}

/// Dense symmetric diagonalisation, sorted ascending.
pub fn dense_eigen(m: &DMatrix<f64>) -> Result<EigenDecomposition> {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::EigFailure("dense symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&a| eig.eigenvalues[a]).collect();
    let orbitals = order
        .iter()
        .map(|&a| eig.eigenvectors.column(a).iter().copied().collect())
        .collect();
    Ok(EigenDecomposition { energies, orbitals })
}

/// Symmetric tridiagonal matrix: diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
            if i > 0 {
                y[i] += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y[i] += self.off[i] * x[i + 1];
            }
        }
        y
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        tql_eigen(&self.diag, &self.off, &mut TrackedRows::empty(self.dim()))
    }

    /// Eigenvalues with all eigenvectors.
    pub fn eigen(&self) -> Result<EigenDecomposition> {
        let n = self.dim();
        let mut rows = TrackedRows::identity(n);
        let energies = tql_eigen(&self.diag, &self.off, &mut rows)?;
        let orbitals = (0..n).map(|a| (0..n).map(|i| rows.row(i)[a]).collect()).collect();
        Ok(EigenDecomposition { energies, orbitals })
    }

    /// Eigenvalues and projections `<r, phi_a>` for each supplied row `r`.
    pub fn eigen_projections(&self, rows: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.dim();
        let mut tr = TrackedRows::empty(n);
        for r in rows {
            tr.push(r);
        }
        let energies = tql_eigen(&self.diag, &self.off, &mut tr)?;
        let proj = (0..tr.rows).map(|r| tr.row(r).to_vec()).collect();
        Ok((energies, proj))
    }
}
