//! Relaxation of symmetric lattice systems with local symmetry-breaking
//! impurities.
//!
//! * [`automaton`]: stochastic cellular automata, exact Markov oracle, Krylov counts.
//! * [`hydro`]: single-flip hydro-mode operators and their spectral correlations.
//! * [`continuum`]: closed-form and quadrature continuum kernels, mode families, asymptotics.
//! * [`superham`]: composite-spin super-Hamiltonians, SLIOM states and effective operators.
//! * [`studies`]: the acceptance studies, one function per criterion.

pub mod automaton;
pub mod continuum;
pub mod error;
pub mod hydro;
pub mod linalg;
pub mod quad;
pub mod series;
pub mod special;
pub mod studies;
pub mod superham;

pub use error::{Error, Result};
pub use linalg::{BandedOperator, EigenDecomposition, SparseOperator, TridiagonalOperator};
pub use series::{CorrelationSeries, PowerLawFit, SeriesMeta};
