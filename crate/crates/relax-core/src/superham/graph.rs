use nalgebra::DMatrix;

use super::sliom::binom;
use super::{build_super_hamiltonian, DEFAULT_SUPER_CAP};
use crate::automaton::{decode, ImpurityKind, ImpuritySpec, ModelId};
use crate::error::{Error, Result};
use crate::linalg::sparse::SparseBuilder;
use crate::linalg::{dense_eigen, SparseOperator};
use num_traits::ToPrimitive;

/// Normalised Laplacian of the t-Jz pattern graph joined by a unit
/// state-flip impurity at site `L`, with the first-spin-down cut.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphLaplacian {
    pub l: usize,
    /// `sum_e w_e (e_p/sqrt D_p - e_q/sqrt D_q)(...)^T`, `D_p = C(L, |p|)`.
    pub operator: SparseOperator,
    pub cut_volume: f64,
    pub cut_boundary: f64,
    /// `2 phi = 2 |dS| / vol(S)`.
    pub cheeger_bound: f64,
}

/// Pattern index: patterns of length `n` occupy `2^n - 1 .. 2^{n+1} - 1`;
/// bit `n - 1 - i` is set when spin `i` is down.
fn pattern_index(len: usize, bits: usize) -> usize {
    (1 << len) - 1 + bits
}

pub fn graph_laplacian_tjz(l: usize) -> Result<GraphLaplacian> {
    let n = (1usize << (l + 1)) - 1;
    if l == 0 || n > 8191 {
        return Err(Error::SizeError { size: n as u128, cap: 8191 });
    }
    let degree: Vec<f64> = (0..=l).map(|m| binom(l, m).to_f64().unwrap()).collect();
    let mut b = SparseBuilder::new(n);
    let (mut boundary, mut volume) = (0.0, 0.0);
    let in_cut = |len: usize, bits: usize| len >= 1 && (bits >> (len - 1)) & 1 == 1;
    for len in 1..=l {
        let w = 0.5 * binom(l - 1, len - 1).to_f64().unwrap();
        let (dp, dq) = (degree[len].sqrt(), degree[len - 1].sqrt());
        for bits in 0..1usize << len {
            let p = pattern_index(len, bits);
            if in_cut(len, bits) {
                volume += degree[len];
            }
            let shorter = (len - 1, bits >> 1);
            let mut edge = |q: usize, dq: f64, crosses: bool| {
                b.add_sym(p, p, w / (dp * dp));
                b.add_sym(q, q, w / (dq * dq));
                b.add_sym(p, q, -w / (dp * dq));
                if crosses {
                    boundary += w;
                }
            };
            edge(pattern_index(shorter.0, shorter.1), dq, in_cut(len, bits) != in_cut(shorter.0, shorter.1));
            if bits & 1 == 0 {
                edge(pattern_index(len, bits | 1), dp, in_cut(len, bits) != in_cut(len, bits | 1));
            }
        }
    }
    Ok(GraphLaplacian {
        l,
        operator: b.build(),
        cut_volume: volume,
        cut_boundary: boundary,
        cheeger_bound: 2.0 * boundary / volume,
    })
}

impl GraphLaplacian {
    /// Lowest nonzero eigenvalue (the graph is connected, so one zero mode).
    pub fn gap(&self) -> Result<f64> {
        Ok(dense_eigen(&self.operator.to_dense())?.energies[1])
    }

    /// `phi^2 / 2` for the same cut.
    pub fn cheeger_lower(&self) -> f64 {
        let phi = self.cut_boundary / self.cut_volume;
        0.5 * phi * phi
    }
}

/// Unit state-flip impurity at site `L`, taken from the composite
/// super-Hamiltonian and projected onto the normalised pattern states
/// (uniform superpositions of all configurations sharing a spin pattern).
/// Rows follow the pattern order of [`graph_laplacian_tjz`].
pub fn pattern_projected_impurity(l: usize) -> Result<DMatrix<f64>> {
    let spec = ImpuritySpec::new(ImpurityKind::Resample, &[l]);
    let with = build_super_hamiltonian(ModelId::TJz, l, Some(&spec), 1.0, DEFAULT_SUPER_CAP)?;
    let without = build_super_hamiltonian(ModelId::TJz, l, None, 0.0, DEFAULT_SUPER_CAP)?;
    let dim = with.dim();
    let np = (1usize << (l + 1)) - 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); np];
    for idx in 0..dim {
        let p: Vec<u8> = decode(idx, 3, l).into_iter().filter(|&s| s != 0).collect();
        let bits = p.iter().fold(0, |acc, &s| (acc << 1) | usize::from(s == 2));
        members[pattern_index(p.len(), bits)].push(idx);
    }
    let basis: Vec<Vec<f64>> = members
        .iter()
        .map(|m| {
            let mut v = vec![0.0; dim];
            let c = 1.0 / (m.len() as f64).sqrt();
            m.iter().for_each(|&i| v[i] = c);
            v
        })
        .collect();
    let mut out = DMatrix::zeros(np, np);
    for (a, va) in basis.iter().enumerate() {
        let img: Vec<f64> = with.matvec(va).iter().zip(without.matvec(va)).map(|(x, y)| x - y).collect();
        for (b, vb) in basis.iter().enumerate() {
            out[(b, a)] = members[b].iter().map(|&i| vb[i] * img[i]).sum();
        }
    }
    Ok(out)
}
