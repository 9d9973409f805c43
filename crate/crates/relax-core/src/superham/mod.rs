//! Composite-spin super-Hamiltonians of the fragmented models, their low
//! spectra, SLIOM trial states and the effective operators obtained by
//! projecting an impurity onto the unperturbed kernel.

mod effective;
mod graph;
mod sliom;

use crate::automaton::{build_gate_set, decode, encode_config, GateRule, ImpurityKind, ImpuritySpec, ModelId};
use crate::error::{Error, Result};
use crate::hydro::{J4_DEFAULT, J5_DEFAULT};
use crate::linalg::sparse::SparseBuilder;
use crate::linalg::{dense_eigen, lowest_eigenpairs, EigenDecomposition, LanczosOptions, SparseOperator};

pub use effective::{
    build_effective_hk, effective_correlation_tjz, hk_ground_energy, naive_u1_splitting, parent_h0,
    two_impurity_effective, EffectiveSpectrum, ParentSpectrum, TwoImpurityModel, TwoImpurityOperator, TwoImpurityResult,
};
pub use graph::{graph_laplacian_tjz, pattern_projected_impurity, GraphLaplacian};
pub use sliom::{
    blockade_energy_exact, h3_blockade_vector, h3_left_vector, sliom_decay_bound, sliom_variational_energy,
    sliom_variational_exact, tjz_kl_vector, tjz_qk_vector, tjz_variational_asymptotic, SliomProbe, SliomState,
};

/// Default cap on the composite dimension, 3^9.
pub const DEFAULT_SUPER_CAP: u128 = 19_683;

/// Weight `w` of the projector `w (|a) - |b))((a| - (b|)` of one bulk
/// transition pair.
fn bulk_weight(model: ModelId, rule: &GateRule) -> f64 {
    let span = rule.support.last().unwrap() - rule.support[0] + 1;
    match model {
        ModelId::U1Half => 8.0,
        ModelId::DipHalfW4W5 if span == 4 => 4.0 * J4_DEFAULT,
        ModelId::DipHalfW4W5 => 4.0 * J5_DEFAULT,
        ModelId::DipOneH3 | ModelId::DipOneH3H4 | ModelId::TJz => 2.0,
    }
}

fn impurity_weight(kind: ImpurityKind, g: f64) -> f64 {
    match kind {
        ImpurityKind::Flip => 2.0 * g,
        ImpurityKind::Swap => g,
        ImpurityKind::Resample => 0.5 * g,
    }
}

/// Sum of rank-one Rokhsar-Kivelson projectors over every transition pair
/// of the model's gates, plus the impurity pairs with strength `g`.
/// Dimension `m^L`.
pub fn build_super_hamiltonian(
    model: ModelId,
    l: usize,
    impurity: Option<&ImpuritySpec>,
    g: f64,
    cap: u128,
) -> Result<SparseOperator> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(crate::error::validation("g", "must be finite and non-negative"));
    }
    let gs = build_gate_set(model, l, impurity)?;
    let m = gs.local_dim();
    let size = (m as u128).pow(l as u32);
    if size > cap {
        return Err(Error::SizeError { size, cap });
    }
    let n = size as usize;
    let mut rules: Vec<(&GateRule, f64)> = gs.bulk_layers.iter().flatten().map(|r| (r, bulk_weight(model, r))).collect();
    if let Some(spec) = impurity {
        let w = impurity_weight(spec.kind, g);
        rules.extend(gs.impurity_rules.iter().map(|r| (r, w)));
    }
    let mut b = SparseBuilder::new(n);
    for idx in 0..n {
        let c = decode(idx, m, l);
        for &(rule, w) in &rules {
            if w == 0.0 {
                continue;
            }
            for nb in rule.neighbours(&c, m) {
                let j = encode_config(&nb, m);
                if j > idx {
                    b.add_pair(idx, j, w);
                }
            }
        }
    }
    Ok(b.build())
}

/// The `n_eigs` lowest eigenpairs, optionally in the orthogonal complement
/// of the orthonormal vectors `deflate`.  Residuals are checked against
/// `1e-8 ||op||`.
pub fn low_spectrum(op: &SparseOperator, n_eigs: usize, deflate: &[Vec<f64>]) -> Result<EigenDecomposition> {
    let n = op.dim();
    let norm = op.norm_bound();
    // Largest-diagonal basis vector plus a fixed smooth perturbation.
    let top = (0..n).max_by(|&a, &b| op.get(a, a).total_cmp(&op.get(b, b))).unwrap_or(0);
    let start: Vec<f64> = (0..n)
        .map(|i| if i == top { 1.0 } else { 0.0 } + 0.1 * ((i as f64 + 1.0) * 0.754_877_666).sin())
        .collect();
    let opts = LanczosOptions { tol: 1e-9, ..LanczosOptions::default() };
    let dec = lowest_eigenpairs(&|x| op.matvec(x), n, n_eigs, deflate, Some(&start), norm, opts)?;
    dec.check_residuals(|x| op.matvec(x), norm, 1e-8)?;
    Ok(dec)
}

/// Normalised uniform vector, the image of the identity operator.
pub fn identity_state(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

/// Lowest eigenvalue above the identity state, which every
/// super-Hamiltonian annihilates.
pub fn super_gap(op: &SparseOperator) -> Result<f64> {
    Ok(low_spectrum(op, 1, &[identity_state(op.dim())])?.energies[0])
}

/// Number of eigenvalues below `1e-9 ||op||` by dense diagonalisation.
pub fn kernel_dimension(op: &SparseOperator) -> Result<usize> {
    if op.dim() > 4096 {
        return Err(Error::SizeError { size: op.dim() as u128, cap: 4096 });
    }
    let tol = 1e-9 * op.norm_bound();
    Ok(dense_eigen(&op.to_dense())?.energies.iter().filter(|&&e| e <= tol).count())
}

/// `index,energy` rows.
pub fn spectrum_csv(energies: &[f64]) -> String {
    let mut out = String::from("index,energy\n");
    for (i, e) in energies.iter().enumerate() {
        out.push_str(&format!("{i},{e:.17e}\n"));
    }
    out
}
