use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::diffusion::{diffusion_boundary_impurity, diffusion_with_sink, gaussian};
use super::kernels::{dipole_leak_rate, subdiffusion_kernel, Geometry};
use super::ContinuumParams;
use crate::error::{Error, Result};
use crate::quad::integrate_panels;
use crate::special::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    U1,
    Dipole,
}

/// Impurity or boundary type; `None` with `Regime::Boundary` is a wall
/// that conserves every charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpurityClass {
    None,
    Sink,
    BoundarySink,
    ChargePreserving,
    FullyBreaking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Bulk,
    Boundary,
    Early,
    Intermediate,
    Late,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Autocorrelation,
    Correlation,
    TotalCharge,
    CenterOfMass,
    DipoleLeakRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub symmetry: Symmetry,
    pub impurity: ImpurityClass,
    pub regime: Regime,
    pub quantity: Quantity,
}

impl RegimeSpec {
    pub const fn new(symmetry: Symmetry, impurity: ImpurityClass, regime: Regime, quantity: Quantity) -> Self {
        Self { symmetry, impurity, regime, quantity }
    }
}

/// A catalogue entry: `quantity ~ amplitude * t^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLaw {
    pub spec: RegimeSpec,
    pub exponent: f64,
    pub amplitude_formula: String,
    /// Dimensionless variable that must be large for the law to hold.
    pub scaling_variable: String,
}

use ImpurityClass as I;
use Quantity as Q;
use Regime as R;
use Symmetry as S;

const ENTRIES: [(RegimeSpec, f64, &str, &str); 16] = [
    (RegimeSpec::new(S::U1, I::None, R::Bulk, Q::Autocorrelation), -0.5, "1/sqrt(4 pi D)", "none (exact)"),
    (RegimeSpec::new(S::U1, I::Sink, R::Early, Q::Autocorrelation), -0.5, "1/sqrt(4 pi D)", "z"),
    (
        RegimeSpec::new(S::U1, I::Sink, R::Intermediate, Q::Correlation),
        -0.5,
        "exp(-(x-x0)^2/4Dt)/sqrt(4 pi D) with offset -1/(4 l_g)",
        "1/z",
    ),
    (
        RegimeSpec::new(S::U1, I::Sink, R::Late, Q::Correlation),
        -1.5,
        "(|x x0| H(x x0) + (|x|+|x0|) l_g + 2 l_g^2) / (sqrt(4 pi) D^{3/2})",
        "z",
    ),
    (RegimeSpec::new(S::U1, I::BoundarySink, R::Early, Q::Autocorrelation), -0.5, "1/sqrt(4 pi D)", "w"),
    (
        RegimeSpec::new(S::U1, I::BoundarySink, R::Late, Q::Correlation),
        -1.5,
        "(x + l_g)(x0 + l_g) / (sqrt(4 pi) D^{3/2})",
        "w",
    ),
    (RegimeSpec::new(S::U1, I::BoundarySink, R::Late, Q::TotalCharge), -0.5, "(x0 + l_g) / sqrt(pi D)", "w"),
    (
        RegimeSpec::new(S::Dipole, I::None, R::Bulk, Q::Autocorrelation),
        -0.25,
        "Gamma(1/4) / (4 pi D^{1/4})",
        "none (exact)",
    ),
    (
        RegimeSpec::new(S::Dipole, I::None, R::Boundary, Q::Correlation),
        -0.25,
        "Gamma(1/4) / (pi D^{1/4})",
        "(Dt)^{1/4}/(x+x0)",
    ),
    (
        RegimeSpec::new(S::Dipole, I::ChargePreserving, R::Late, Q::Correlation),
        -0.25,
        "Gamma(1/4) / (2 pi D^{1/4})",
        "(Dt)^{1/4}/(x+x0)",
    ),
    (
        RegimeSpec::new(S::Dipole, I::ChargePreserving, R::Late, Q::DipoleLeakRate),
        -0.75,
        "D^{1/4} Gamma(3/4) / (2 pi)",
        "(Dt)^{1/4}/x0",
    ),
    (
        RegimeSpec::new(S::Dipole, I::ChargePreserving, R::Late, Q::CenterOfMass),
        0.25,
        "2 Gamma(3/4) D^{1/4} / pi",
        "(Dt)^{1/4}/x0",
    ),
    (
        RegimeSpec::new(S::Dipole, I::FullyBreaking, R::Early, Q::Autocorrelation),
        -0.25,
        "Gamma(1/4) / (4 pi D^{1/4})",
        "x0/(Dt)^{1/4}",
    ),
    (
        RegimeSpec::new(S::Dipole, I::FullyBreaking, R::Late, Q::Correlation),
        -1.25,
        "Gamma(5/4) x^2 x0^2 / (4 pi D^{5/4})",
        "(Dt)^{1/4}/(x+x0)",
    ),
    (
        RegimeSpec::new(S::Dipole, I::FullyBreaking, R::Late, Q::TotalCharge),
        -0.5,
        "x0^2 / (2 sqrt(pi D))",
        "(Dt)^{1/4}/x0",
    ),
    (
        RegimeSpec::new(S::Dipole, I::FullyBreaking, R::Late, Q::CenterOfMass),
        -0.25,
        "2 Gamma(5/4) x0^2 / (pi D^{1/4})",
        "(Dt)^{1/4}/x0",
    ),
];

/// Every catalogued law.
pub fn catalogue() -> Vec<AsymptoticLaw> {
    ENTRIES
        .iter()
        .map(|&(spec, exponent, amp, var)| AsymptoticLaw {
            spec,
            exponent,
            amplitude_formula: amp.to_string(),
            scaling_variable: var.to_string(),
        })
        .collect()
}

/// Looks up the law for `spec`.
pub fn asymptotic_law(spec: &RegimeSpec) -> Result<AsymptoticLaw> {
    catalogue()
        .into_iter()
        .find(|l| l.spec == *spec)
        .ok_or_else(|| Error::UnknownRegime(format!("{spec:?}")))
}

/// Comparison of a law against direct evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogueCheck {
    pub spec: RegimeSpec,
    pub params: ContinuumParams,
    pub variable: f64,
    pub predicted: f64,
    pub exact: f64,
    pub relative_deviation: f64,
}

/// Smaller root of `y^2 - b y + c = 0`.
fn small_root(b: f64, c: f64) -> f64 {
    2.0 * c / (b + (b * b - 4.0 * c).max(0.0).sqrt())
}

fn large_root(b: f64, c: f64) -> f64 {
    0.5 * (b + (b * b - 4.0 * c).max(0.0).sqrt())
}

fn sink_z(p: &ContinuumParams) -> f64 {
    let dt = p.d * p.t;
    dt.sqrt() / (2.0 * p.ell_g()) + ((p.x - p.xs).abs() + (p.xs - p.x0).abs()) / (4.0 * dt).sqrt()
}

fn boundary_w(p: &ContinuumParams) -> f64 {
    let dt = p.d * p.t;
    dt.sqrt() / p.ell_g() + (p.x + p.x0) / (4.0 * dt).sqrt()
}

/// Integral of `weight(x) * f(x)` over `[0, hi]`, resolved on `panels`.
fn half_line_integral(f: &dyn Fn(f64) -> f64, hi: f64, panels: usize, scale: f64) -> Result<f64> {
    let breaks: Vec<f64> = (0..=panels).map(|i| hi * i as f64 / panels as f64).collect();
    Ok(integrate_panels(f, &breaks, 1e-9 * scale)?.0)
}

impl AsymptoticLaw {
    /// Value predicted by the law.
    pub fn predict(&self, p: &ContinuumParams) -> f64 {
        let (d, t, x, x0, l) = (p.d, p.t, p.x, p.x0, p.ell_g());
        let dt = d * t;
        let s = self.spec;
        match (s.symmetry, s.impurity, s.regime, s.quantity) {
            (S::U1, I::Sink, R::Intermediate, _) => gaussian(x - x0, d, t) - 1.0 / (4.0 * l),
            (S::U1, I::Sink, R::Late, _) => {
                let same = if x * x0 > 0.0 { (x * x0).abs() } else { 0.0 };
                (same + (x.abs() + x0.abs()) * l + 2.0 * l * l) / ((4.0 * PI).sqrt() * dt.powf(1.5))
            }
            (S::U1, I::BoundarySink, R::Late, Q::Correlation) => {
                (x + l) * (x0 + l) / ((4.0 * PI).sqrt() * dt.powf(1.5))
            }
            (S::U1, I::BoundarySink, R::Late, Q::TotalCharge) => (x0 + l) / (PI * dt).sqrt(),
            (S::U1, ..) => 1.0 / (4.0 * PI * dt).sqrt(),
            (S::Dipole, I::None, R::Boundary, _) => gamma(0.25) / (PI * dt.powf(0.25)),
            (S::Dipole, I::ChargePreserving, _, Q::Correlation) => gamma(0.25) / (2.0 * PI * dt.powf(0.25)),
            (S::Dipole, I::ChargePreserving, _, Q::DipoleLeakRate) => d * gamma(0.75) / (2.0 * PI * dt.powf(0.75)),
            (S::Dipole, I::ChargePreserving, _, Q::CenterOfMass) => 2.0 * gamma(0.75) * dt.powf(0.25) / PI,
            (S::Dipole, I::FullyBreaking, R::Late, Q::Correlation) => {
                gamma(1.25) * x * x * x0 * x0 / (4.0 * PI * dt.powf(1.25))
            }
            (S::Dipole, I::FullyBreaking, R::Late, Q::TotalCharge) => x0 * x0 / (2.0 * (PI * dt).sqrt()),
            (S::Dipole, I::FullyBreaking, R::Late, Q::CenterOfMass) => 2.0 * gamma(1.25) * x0 * x0 / (PI * dt.powf(0.25)),
            (S::Dipole, ..) => gamma(0.25) / (4.0 * PI * dt.powf(0.25)),
        }
    }

    /// Direct evaluation from the exact solution or kernel quadrature.
    pub fn exact(&self, p: &ContinuumParams) -> Result<f64> {
        let s = self.spec;
        let sc = (p.d * p.t).powf(0.25);
        let kernel = |geom: Geometry| {
            move |x: f64| subdiffusion_kernel(&ContinuumParams { x, ..*p }, geom).unwrap_or(f64::NAN)
        };
        let scale = self.predict(p).abs();
        match (s.symmetry, s.impurity, s.quantity) {
            (S::U1, I::None, _) => Ok(gaussian(p.x - p.x0, p.d, p.t)),
            (S::U1, I::Sink, _) => diffusion_with_sink(p),
            (S::U1, I::BoundarySink, Q::TotalCharge) => {
                let hi = p.x0 + 40.0 * (p.d * p.t).sqrt();
                let f = |x: f64| diffusion_boundary_impurity(&ContinuumParams { x: x.max(1e-300), ..*p }).unwrap_or(f64::NAN);
                half_line_integral(&f, hi, 64, scale)
            }
            (S::U1, I::BoundarySink, _) => diffusion_boundary_impurity(p),
            (S::Dipole, I::None, _) => {
                let geom = if s.regime == R::Boundary { Geometry::SemiSymmetric } else { Geometry::Infinite };
                subdiffusion_kernel(p, geom)
            }
            (S::Dipole, I::ChargePreserving, Q::DipoleLeakRate) => dipole_leak_rate(p.d, p.x0, p.t),
            (S::Dipole, I::ChargePreserving, Q::CenterOfMass) => {
                let k = kernel(Geometry::SemiChargePreserving);
                let hi = p.x0 + 30.0 * sc;
                half_line_integral(&|x| x * k(x), hi, 120, scale)
            }
            (S::Dipole, I::ChargePreserving, _) => subdiffusion_kernel(p, Geometry::SemiChargePreserving),
            (S::Dipole, I::FullyBreaking, Q::TotalCharge) => {
                let k = kernel(Geometry::SemiFullyBreaking);
                half_line_integral(&k, p.x0 + 30.0 * sc, 120, scale)
            }
            (S::Dipole, I::FullyBreaking, Q::CenterOfMass) => {
                let k = kernel(Geometry::SemiFullyBreaking);
                half_line_integral(&|x| x * k(x), p.x0 + 30.0 * sc, 120, scale)
            }
            (S::Dipole, I::FullyBreaking, _) => subdiffusion_kernel(p, Geometry::SemiFullyBreaking),
            _ => Err(Error::UnknownRegime(format!("{s:?}"))),
        }
    }

    /// Current value of the scaling variable (infinite for exact laws).
    pub fn variable(&self, p: &ContinuumParams) -> f64 {
        let s = self.spec;
        let sc = (p.d * p.t).powf(0.25);
        match (s.symmetry, s.impurity, s.regime, s.quantity) {
            (S::Dipole, I::None, R::Bulk, _) => f64::INFINITY,
            (S::U1, I::Sink, R::Intermediate, _) => 1.0 / sink_z(p),
            (S::U1, I::Sink, ..) => sink_z(p),
            (S::U1, I::BoundarySink, ..) => boundary_w(p),
            (S::U1, ..) => f64::INFINITY,
            (S::Dipole, _, R::Early, _) => p.x.min(p.x0) / sc,
            (S::Dipole, _, _, Q::Correlation | Q::Autocorrelation) => sc / (p.x + p.x0),
            (S::Dipole, ..) => sc / p.x0,
        }
    }

    /// Parameters at which the scaling variable equals `var` (`D = 1`).
    pub fn check_point(&self, var: f64) -> ContinuumParams {
        let s = self.spec;
        let at = |g: f64, x: f64, x0: f64, t: f64| ContinuumParams::new(1.0, g, x, x0, t);
        match (s.symmetry, s.impurity, s.regime, s.quantity) {
            (S::U1, I::Sink, R::Early, _) => {
                let (l, a) = (10.0, 100.0);
                let y = small_root(2.0 * l * var, l * a);
                at(1.0 / l, 50.0, 50.0, y * y)
            }
            (S::U1, I::Sink, R::Intermediate, _) => {
                let (l, a) = (1e6, 2.0);
                let y = small_root(2.0 * l / var, l * a);
                at(1.0 / l, 1.0, 1.0, y * y)
            }
            (S::U1, I::Sink, ..) => {
                let (l, a) = (2.0, 3.0);
                let y = large_root(2.0 * l * var, l * a);
                at(1.0 / l, 1.0, 2.0, y * y)
            }
            (S::U1, I::BoundarySink, R::Early, _) => {
                let (l, sum) = (10.0, 200.0);
                let y = small_root(l * var, l * sum / 2.0);
                at(1.0 / l, 100.0, 100.0, y * y)
            }
            (S::U1, I::BoundarySink, _, Q::TotalCharge) => {
                let (l, sum) = (2.0, 2.0);
                let y = large_root(l * var, l * sum / 2.0);
                at(1.0 / l, 0.0, 2.0, y * y)
            }
            (S::U1, I::BoundarySink, ..) => {
                let (l, sum) = (2.0, 3.0);
                let y = large_root(l * var, l * sum / 2.0);
                at(1.0 / l, 1.0, 2.0, y * y)
            }
            (S::U1, ..) => at(0.0, 0.0, 0.0, var * var),
            (S::Dipole, I::None, R::Bulk, _) => at(0.0, 0.0, 0.0, var.powi(4)),
            (S::Dipole, _, R::Early, _) => at(0.0, var, var, 1.0),
            (S::Dipole, _, _, Q::Correlation | Q::Autocorrelation) => at(0.0, 1.0, 1.0, (2.0 * var).powi(4)),
            (S::Dipole, ..) => at(0.0, 0.0, 1.0, var.powi(4)),
        }
    }

    /// Evaluates both sides at the check point for `var`.
    pub fn validate(&self, var: f64) -> Result<CatalogueCheck> {
        let params = self.check_point(var);
        let predicted = self.predict(&params);
        let exact = self.exact(&params)?;
        Ok(CatalogueCheck {
            spec: self.spec,
            params,
            variable: self.variable(&params),
            predicted,
            exact,
            relative_deviation: (predicted - exact).abs() / exact.abs(),
        })
    }
}

/// Tree-level classification of a point impurity in `d` dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RgClass {
    Relevant,
    Marginal,
    Irrelevant,
}

/// Flow coefficient `2 - d` of the impurity strength and its class.
pub fn rg_dimension(d: u32) -> (i32, RgClass) {
    let c = 2 - d as i32;
    let class = match c.signum() {
        1 => RgClass::Relevant,
        0 => RgClass::Marginal,
        _ => RgClass::Irrelevant,
    };
    (c, class)
}
