use std::f64::consts::PI;

use statrs::function::erf::erf;

use super::ContinuumParams;
use crate::error::{Error, Result};
use crate::special::erfcx;

/// Free heat kernel `exp(-y^2/4Dt)/sqrt(4 pi D t)`.
pub fn gaussian(y: f64, d: f64, t: f64) -> f64 {
    (-y * y / (4.0 * d * t)).exp() / (4.0 * PI * d * t).sqrt()
}

pub(crate) fn initial_value(p: &ContinuumParams) -> Result<f64> {
    if p.x == p.x0 {
        Err(Error::DomainError("t = 0 at x = x0 is a delta function".into()))
    } else {
        Ok(0.0)
    }
}

/// Infinite line with a point sink of strength `g` at `xs`.
pub fn diffusion_with_sink(p: &ContinuumParams) -> Result<f64> {
    p.check()?;
    if p.t == 0.0 {
        return initial_value(p);
    }
    let dt = p.d * p.t;
    let free = gaussian(p.x - p.x0, p.d, p.t);
    if p.g == 0.0 {
        return Ok(free);
    }
    let a = (p.x - p.xs).abs() + (p.xs - p.x0).abs();
    let image = (-a * a / (4.0 * dt)).exp();
    let sink = if p.g.is_infinite() {
        image / (4.0 * PI * dt).sqrt()
    } else {
        let ell = p.ell_g();
        let z = dt.sqrt() / (2.0 * ell) + a / (4.0 * dt).sqrt();
        image * erfcx(z) / (4.0 * ell)
    };
    Ok((free - sink).max(0.0))
}

/// Half line `x > 0` with the sink on the boundary (Robin condition
/// `D C' = g C` at 0).
pub fn diffusion_boundary_impurity(p: &ContinuumParams) -> Result<f64> {
    p.check()?;
    if p.x <= 0.0 || p.x0 <= 0.0 {
        return Err(Error::DomainError(format!("half-line positions must be positive (x={}, x0={})", p.x, p.x0)));
    }
    if p.t == 0.0 {
        return initial_value(p);
    }
    let dt = p.d * p.t;
    let reflected = gaussian(p.x - p.x0, p.d, p.t) + gaussian(p.x + p.x0, p.d, p.t);
    if p.g == 0.0 {
        return Ok(reflected);
    }
    let s = p.x + p.x0;
    let loss = if p.g.is_infinite() {
        2.0 * gaussian(s, p.d, p.t)
    } else {
        let ell = p.ell_g();
        let w = dt.sqrt() / ell + s / (4.0 * dt).sqrt();
        (-s * s / (4.0 * dt)).exp() * erfcx(w) / ell
    };
    Ok((reflected - loss).max(0.0))
}

/// Absorbing half line, `G(x - x0) - G(x + x0)`.
pub fn absorbing_half_line(x: f64, x0: f64, d: f64, t: f64) -> f64 {
    gaussian(x - x0, d, t) - gaussian(x + x0, d, t)
}

/// Charge left on the absorbing half line, `erf(x0 / 2 sqrt(Dt))`.
pub fn boundary_remaining_charge(x0: f64, d: f64, t: f64) -> f64 {
    erf(x0 / (2.0 * (d * t).sqrt()))
}
