//! Experiment descriptors: one TOML file per run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use relax_core::automaton::{ImpurityKind, ImpuritySpec, ModelId};
use relax_core::continuum::{ContinuumParams, RegimeSpec};
use relax_core::series::{integer_log_grid, log_grid, POINTS_PER_DECADE};
use relax_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Monte Carlo cellular automaton.
    Automaton,
    /// Exact Markov chain of the same automaton.
    Oracle,
    /// Single-flip hydro-mode spectral sums.
    Hydro,
    /// Closed-form or quadrature continuum solution.
    Continuum,
    /// Super-Hamiltonian spectra and effective correlations.
    Superham,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpurityDescriptor {
    pub kind: ImpurityKind,
    /// 1-based sites; negative values count from the right end (`-1` is `L`).
    pub sites: Vec<i64>,
    #[serde(default = "unit")]
    pub g: f64,
}

fn unit() -> f64 {
    1.0
}

/// Either explicit points or a log grid `lo..=hi` with `per_decade` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default)]
    pub points: Option<Vec<f64>>,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default)]
    pub per_decade: Option<usize>,
}

impl TimeGrid {
    /// Real-valued grid.
    pub fn times(&self) -> Vec<f64> {
        match &self.points {
            Some(p) => p.clone(),
            None => log_grid(
                self.lo.unwrap_or(1.0),
                self.hi.unwrap_or(1e3),
                self.per_decade.unwrap_or(POINTS_PER_DECADE),
            ),
        }
    }

    /// Integer CA grid: explicit points, or `0` plus a rounded log grid up
    /// to `hi`.
    pub fn steps(&self) -> Vec<u64> {
        match &self.points {
            Some(p) => p.iter().map(|t| *t as u64).collect(),
            None => integer_log_grid(self.hi.unwrap_or(1e3) as u64, self.per_decade.unwrap_or(POINTS_PER_DECADE)),
        }
    }

    fn validate(&self, integer: bool) -> Result<(), Error> {
        if let Some(p) = &self.points {
            if p.is_empty() {
                return Err(invalid("time.points", "must not be empty"));
            }
            if p.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("time.points", "must be strictly increasing"));
            }
            if p.iter().any(|&t| !(t >= 0.0) || (integer && t.fract() != 0.0)) {
                let what = if integer { "non-negative integers" } else { "non-negative" };
                return Err(invalid("time.points", format!("must be {what}")));
            }
            return Ok(());
        }
        let lo = self.lo.unwrap_or(1.0);
        let hi = self.hi.unwrap_or(1e3);
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(invalid("time", "need 0 < lo < hi"));
        }
        if self.per_decade == Some(0) {
            return Err(invalid("time.per_decade", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { points: None, lo: Some(1.0), hi: Some(1e3), per_decade: Some(POINTS_PER_DECADE) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuperhamQuantity {
    /// Lowest nonzero eigenvalue for each size in `sizes`.
    Gap,
    /// Effective t-Jz autocorrelation of each probe site.
    EffectiveCorrelation,
    /// Ground energy of the SLIOM-hopping operator for each size.
    SliomHoppingGap,
    /// Full spectrum of the parent operator for each size, beside its
    /// closed form.
    ParentSpectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDescriptor {
    pub id: String,
    pub engine: Engine,
    #[serde(default)]
    pub description: String,
    /// Model name as accepted by `ModelId::from_str`; unused by `continuum`.
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub l: Option<usize>,
    /// Size sweep for gap studies.
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub impurity: Option<ImpurityDescriptor>,
    #[serde(default)]
    pub probes: Vec<usize>,
    #[serde(default)]
    pub time: TimeGrid,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Open or periodic chain for U(1) hydro runs.
    #[serde(default)]
    pub periodic: bool,
    #[serde(default)]
    pub quantity: Option<SuperhamQuantity>,
    /// Regime and positions for continuum runs.
    #[serde(default)]
    pub regime: Option<RegimeSpec>,
    #[serde(default)]
    pub params: Option<ContinuumParams>,
    /// Acceptance criterion this descriptor reproduces.
    #[serde(default)]
    pub criterion: Option<u8>,
    /// Output directory; defaults to `<out>/<id>`.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

pub fn invalid(path: &str, reason: impl Into<String>) -> Error {
    Error::ValidationError { path: path.to_string(), reason: reason.into() }
}

impl ExperimentDescriptor {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let d: Self = toml::from_str(text).map_err(|e| invalid(&toml_path(&e), e.message().to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_toml(&text)?)
    }

    pub fn model_id(&self) -> Result<ModelId, Error> {
        self.model.as_deref().ok_or_else(|| invalid("model", "required for this engine"))?.parse()
    }

    pub fn size(&self) -> Result<usize, Error> {
        self.l.ok_or_else(|| invalid("l", "required for this engine"))
    }

    /// Impurity placed on a chain of `l` sites.
    pub fn impurity_spec(&self, l: usize) -> Option<ImpuritySpec> {
        self.impurity.as_ref().map(|i| ImpuritySpec::new(i.kind, &resolve_sites(&i.sites, l)))
    }

    pub fn impurity_strength(&self) -> f64 {
        self.impurity.as_ref().map_or(0.0, |i| i.g)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.id.is_empty() || self.id.contains(['/', '\\']) {
            return Err(invalid("id", "must be a non-empty file name"));
        }
        if let Some(c) = self.criterion {
            relax_core::studies::title(c).map_err(|_| invalid("criterion", "must lie in 1..=13"))?;
        }
        if self.samples == Some(0) {
            return Err(invalid("samples", "must be at least 1"));
        }
        if let Some(imp) = &self.impurity {
            if imp.sites.is_empty() {
                return Err(invalid("impurity.sites", "must not be empty"));
            }
            if !(imp.g >= 0.0 && imp.g.is_finite()) {
                return Err(invalid("impurity.g", "must be finite and non-negative"));
            }
        }
        match self.engine {
            Engine::Automaton | Engine::Oracle => {
                self.model_id()?;
                self.check_sites(self.size()?)?;
                if self.engine == Engine::Automaton && self.samples.is_none() {
                    return Err(invalid("samples", "required for the automaton engine"));
                }
                self.time.validate(true)?;
            }
            Engine::Hydro => {
                let m = self.model_id()?;
                if !matches!(m, ModelId::U1Half | ModelId::DipHalfW4W5) {
                    return Err(invalid("model", "hydro runs support u1 and w4w5"));
                }
                let l = self.size()?;
                self.check_sites(l)?;
                self.check_hydro_impurity(m, l)?;
                self.time.validate(false)?;
            }
            Engine::Continuum => {
                if self.regime.is_none() {
                    return Err(invalid("regime", "required for the continuum engine"));
                }
                if self.params.is_none() {
                    return Err(invalid("params", "required for the continuum engine"));
                }
                self.time.validate(false)?;
            }
            Engine::Superham => match self.quantity {
                None => return Err(invalid("quantity", "required for the superham engine")),
                Some(SuperhamQuantity::EffectiveCorrelation) => {
                    self.check_sites(self.size()?)?;
                    self.time.validate(false)?;
                }
                Some(q) => {
                    if self.sizes.is_empty() {
                        return Err(invalid("sizes", "must list at least one size"));
                    }
                    if q == SuperhamQuantity::Gap {
                        self.model_id()?;
                        let min = *self.sizes.iter().min().unwrap();
                        if let Some(imp) = &self.impurity {
                            check_impurity_sites(&imp.sites, min)?;
                        }
                    }
                }
            },
        }
        Ok(())
    }

    fn check_hydro_impurity(&self, m: ModelId, l: usize) -> Result<(), Error> {
        let Some(imp) = &self.impurity else { return Ok(()) };
        let sites = resolve_sites(&imp.sites, l);
        let ok = match (m, imp.kind) {
            (ModelId::U1Half, _) => sites.len() == 1,
            (_, ImpurityKind::Swap) => sites == [1, 2],
            (_, ImpurityKind::Flip) => sites == [1, 2, 3],
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(
                "impurity",
                "hydro runs take one site on u1, swap@1,2 or flip@1,2,3 on w4w5",
            ))
        }
    }

    fn check_sites(&self, l: usize) -> Result<(), Error> {
        if self.probes.is_empty() {
            return Err(invalid("probes", "must list at least one site"));
        }
        if let Some(&j) = self.probes.iter().find(|&&j| j == 0 || j > l) {
            return Err(invalid("probes", format!("site {j} outside [1, {l}]")));
        }
        if let Some(imp) = &self.impurity {
            check_impurity_sites(&imp.sites, l)?;
        }
        Ok(())
    }
}

fn check_impurity_sites(sites: &[i64], l: usize) -> Result<(), Error> {
    let l = l as i64;
    match sites.iter().find(|&&j| j == 0 || j > l || j < -l) {
        Some(j) => Err(invalid("impurity.sites", format!("site {j} outside [1, {l}] (or [-{l}, -1] from the right)"))),
        None => Ok(()),
    }
}

fn toml_path(e: &toml::de::Error) -> String {
    // toml reports "unknown field `x`" or "missing field `x`" in the message.
    let msg = e.message();
    msg.split('`').nth(1).filter(|f| !f.is_empty()).unwrap_or("descriptor").to_string()
}

/// 1-based sites on a chain of `l`, with negative entries counted from
/// the right end.
pub fn resolve_sites(sites: &[i64], l: usize) -> Vec<usize> {
    sites.iter().map(|&s| if s < 0 { (l as i64 + 1 + s) as usize } else { s as usize }).collect()
}
