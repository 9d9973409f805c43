use super::Measurement;
use crate::continuum::{catalogue, diffusion_with_sink, ContinuumParams};
use crate::error::Result;
use crate::quad::integrate;

/// Scaling-variable value at which the catalogue is checked.
pub const CATALOGUE_VARIABLE: f64 = 10.0;
pub const CATALOGUE_TOLERANCE: f64 = 0.05;

/// Relative mismatch of the derivative jump `D [C']` against `g C(x_s)`,
/// by second-order one-sided differences with step `h`.
pub fn flux_mismatch(p: &ContinuumParams, h: f64) -> Result<f64> {
    let at = |x: f64| diffusion_with_sink(&ContinuumParams { x, ..*p });
    let xs = p.xs;
    let right = (-3.0 * at(xs)? + 4.0 * at(xs + h)? - at(xs + 2.0 * h)?) / (2.0 * h);
    let left = (3.0 * at(xs)? - 4.0 * at(xs - h)? + at(xs - 2.0 * h)?) / (2.0 * h);
    let target = p.g * at(xs)?;
    Ok((p.d * (right - left) - target).abs() / target.abs())
}

pub fn continuum_invariants() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    let cases = [(1.0, 0.5, 1.0, 0.0, 3.0), (2.0, 3.0, -0.7, 0.4, 0.8), (8.0, 4.0, 5.0, 1.0, 20.0)];
    for (d, g, x0, xs, t) in cases {
        let p = ContinuumParams { d, g, x: xs, x0, xs, t };
        m.push(Measurement::at_most(format!("flux matching D={d} g={g} t={t}"), flux_mismatch(&p, 1e-4)?, 1e-4));
        let jump = (diffusion_with_sink(&ContinuumParams { x: xs + 1e-9, ..p })?
            - diffusion_with_sink(&ContinuumParams { x: xs - 1e-9, ..p })?)
        .abs();
        m.push(Measurement::at_most(format!("continuity D={d} g={g} t={t}"), jump, 1e-8));
    }
    for t in [0.01f64, 1.0, 50.0] {
        let x0 = 0.3;
        let w = 30.0 * t.sqrt();
        let total = integrate(
            &|x| diffusion_with_sink(&ContinuumParams::new(1.0, 0.0, x, x0, t)).unwrap_or(f64::NAN),
            x0 - w,
            x0 + w,
            16,
            1e-12,
        )?;
        m.push(Measurement::within(format!("normalisation at g=0, t={t}"), total, 1.0, 1e-6));
    }
    for law in catalogue() {
        let c = law.validate(CATALOGUE_VARIABLE)?;
        let s = law.spec;
        m.push(Measurement::at_most(
            format!("{:?}/{:?}/{:?}/{:?} relative deviation", s.symmetry, s.impurity, s.regime, s.quantity),
            c.relative_deviation,
            CATALOGUE_TOLERANCE,
        ));
    }
    Ok(m)
}
