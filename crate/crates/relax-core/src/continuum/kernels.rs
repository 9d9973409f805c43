use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ContinuumParams;
use crate::error::{Error, Result};
use crate::quad::integrate_panels;

/// Geometry and boundary type of the quartic kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Infinite,
    SemiSymmetric,
    SemiChargePreserving,
    SemiFullyBreaking,
}

/// Beyond this `u = k (Dt)^{1/4}` the weight `exp(-u^4)` is below 1e-50.
const U_MAX: f64 = 3.4;

/// `int_0^inf exp(-u^4) f(u) du` with panels fine enough to resolve
/// oscillations of wavenumber up to `freq`.
pub(crate) fn quartic_integral(f: &dyn Fn(f64) -> f64, freq: f64, abs_tol: f64) -> Result<f64> {
    let pieces = ((U_MAX * freq / (PI / 4.0)).ceil() as usize).clamp(8, 100_000);
    let breaks: Vec<f64> = (0..=pieces).map(|i| U_MAX * i as f64 / pieces as f64).collect();
    let g = |u: f64| (-u.powi(4)).exp() * f(u);
    Ok(integrate_panels(&g, &breaks, abs_tol)?.0)
}

/// Semi-infinite mode shape with both conservation laws at the wall.
pub(crate) fn symmetric_shape(q: f64) -> f64 {
    q.cos() - q.sin() + (-q).exp()
}

/// Semi-infinite mode shape with `phi = phi' = 0` at the wall.
pub(crate) fn breaking_shape(q: f64) -> f64 {
    q.cos() - q.sin() - (-q).exp()
}

/// Quartic subdiffusion kernel `C(x, x0; t)` for `d_t C = -D d_x^4 C`,
/// by quadrature of its mode integral.  Absolute error target
/// `1e-8 (Dt)^{-1/4}` or better.
pub fn subdiffusion_kernel(p: &ContinuumParams, geometry: Geometry) -> Result<f64> {
    p.check()?;
    if geometry != Geometry::Infinite && (p.x < 0.0 || p.x0 < 0.0) {
        return Err(Error::DomainError("half-line positions must be non-negative".into()));
    }
    if p.t == 0.0 {
        return super::diffusion::initial_value(p);
    }
    let s = (p.d * p.t).powf(0.25);
    let (xs, x0s) = (p.x / s, p.x0 / s);
    let freq = xs.abs() + x0s.abs();
    let tol = 1e-12;
    let v = match geometry {
        Geometry::Infinite => quartic_integral(&|u| (u * (xs - x0s)).cos(), freq, tol)? / PI,
        Geometry::SemiSymmetric => {
            quartic_integral(&|u| symmetric_shape(u * xs) * symmetric_shape(u * x0s), freq, tol)? / PI
        }
        Geometry::SemiChargePreserving => {
            2.0 * quartic_integral(&|u| (u * xs).cos() * (u * x0s).cos(), freq, tol)? / PI
        }
        Geometry::SemiFullyBreaking => {
            quartic_integral(&|u| breaking_shape(u * xs) * breaking_shape(u * x0s), freq, tol)? / PI
        }
    };
    Ok(v / s)
}

/// Rate of change of the dipole moment behind a charge-preserving wall,
/// `(2D/pi) int dk exp(-D k^4 t) k^2 cos(k x0)`.
pub fn dipole_leak_rate(d: f64, x0: f64, t: f64) -> Result<f64> {
    if !(d > 0.0 && t > 0.0) {
        return Err(Error::DomainError("need D > 0 and t > 0".into()));
    }
    let s = (d * t).powf(0.25);
    let x0s = x0 / s;
    let v = quartic_integral(&|u| u * u * (u * x0s).cos(), x0s.abs(), 1e-12)?;
    Ok(2.0 * d * v / (PI * s.powi(3)))
}
