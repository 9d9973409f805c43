//! Fixtures shared by the benchmarks in `benches/`.
//!
//! Each fixture is built once per benchmark group so the timed closure
//! measures only the kernel.

use relax_core::automaton::{build_gate_set, GateSet, ImpurityKind, ImpuritySpec, ModelId};
use relax_core::hydro::{build_dipole, build_u1, Boundary, DipoleImpurity, SiteImpurity, J4_DEFAULT, J5_DEFAULT};
use relax_core::linalg::{BandedOperator, SparseOperator};
use relax_core::superham::{build_super_hamiltonian, DEFAULT_SUPER_CAP};

/// U(1) chain with a flip impurity on site 1.
pub fn u1_gate_set(l: usize) -> GateSet {
    build_gate_set(ModelId::U1Half, l, Some(&ImpuritySpec::new(ImpurityKind::Flip, &[1]))).expect("valid fixture")
}

/// Open U(1) hydro operator with an edge impurity.
pub fn u1_hydro(l: usize) -> BandedOperator {
    build_u1(l, Boundary::Open, Some(SiteImpurity { site: 1, g: 1.0 })).expect("valid fixture")
}

/// Dipole hydro operator with the charge-preserving edge swap.
pub fn dipole_hydro(l: usize) -> BandedOperator {
    build_dipole(l, J4_DEFAULT, J5_DEFAULT, DipoleImpurity::ChargePreserving { g: 1.0 }).expect("valid fixture")
}

/// t-Jz super-Hamiltonian with a resampling impurity on the last site.
pub fn tjz_super(l: usize) -> SparseOperator {
    let imp = ImpuritySpec::new(ImpurityKind::Resample, &[l]);
    build_super_hamiltonian(ModelId::TJz, l, Some(&imp), 1.0, DEFAULT_SUPER_CAP).expect("valid fixture")
}
