//! Stochastic cellular automata with impurity gates, an exact Markov
//! oracle and Krylov-subspace enumeration.

mod gates;
mod krylov;
mod model;
mod oracle;
mod sampler;

pub use gates::{build_gate_set, GateRule, GateSet, RuleKind};
pub use krylov::{enumerate_krylov, KrylovReport};
pub use model::{ImpurityKind, ImpuritySpec, ModelId};
pub use oracle::{
    decode, encode_config, markov_cross_correlation, markov_oracle, transition_matrix, DEFAULT_STATE_CAP,
};
pub use sampler::{estimate_autocorrelation, estimate_magnetization, SamplerOptions, CHUNK, DEFAULT_BUDGET};

/// A classical configuration: one local state per site.
pub type SpinConfiguration = Vec<u8>;
