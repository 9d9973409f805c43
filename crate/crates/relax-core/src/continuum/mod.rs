//! Continuum solutions: diffusion with a point sink, the boundary sink,
//! quartic subdiffusion kernels, biharmonic mode families and the
//! catalogue of late-time laws.

mod catalogue;
mod diffusion;
mod kernels;
mod modes;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalogue::{
    asymptotic_law, catalogue, rg_dimension, AsymptoticLaw, CatalogueCheck, ImpurityClass, Quantity, Regime, RegimeSpec, RgClass,
    Symmetry,
};
pub use diffusion::{absorbing_half_line, boundary_remaining_charge, diffusion_boundary_impurity, diffusion_with_sink, gaussian};
pub use kernels::{dipole_leak_rate, subdiffusion_kernel, Geometry};
pub use modes::{biharmonic_modes, BcKind, ModeFamily};

/// Diffusion constant `d`, impurity strength `g` (`f64::INFINITY` for a
/// perfectly absorbing sink), probe `x`, source `x0`, sink `xs`, time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumParams {
    pub d: f64,
    pub g: f64,
    pub x: f64,
    pub x0: f64,
    pub xs: f64,
    pub t: f64,
}

impl ContinuumParams {
    pub fn new(d: f64, g: f64, x: f64, x0: f64, t: f64) -> Self {
        Self { d, g, x, x0, xs: 0.0, t }
    }

    /// `D / g`; infinite without impurity, zero for an absorbing one.
    pub fn ell_g(&self) -> f64 {
        self.d / self.g
    }

    fn check(&self) -> Result<()> {
        if !(self.d > 0.0) || self.t < 0.0 || self.g < 0.0 || self.g.is_nan() {
            return Err(Error::DomainError(format!("need D > 0, t >= 0, g >= 0 (got D={}, t={}, g={})", self.d, self.t, self.g)));
        }
        Ok(())
    }
}
