use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error};

/// The lattice models with their local Hilbert-space dimension and
/// conservation laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelId {
    /// Spin-1/2 with U(1) charge (nearest-neighbour swaps).
    U1Half,
    /// Spin-1/2 dipole-conserving, 4- and 5-site moves.
    DipHalfW4W5,
    /// Spin-1 dipole-conserving, 3-site moves (strongly fragmented).
    DipOneH3,
    /// Spin-1 dipole-conserving, 3- and 4-site moves (weakly fragmented).
    DipOneH3H4,
    /// Spin-1/2 particles with holes, pattern-conserving hops.
    TJz,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [
        ModelId::U1Half,
        ModelId::DipHalfW4W5,
        ModelId::DipOneH3,
        ModelId::DipOneH3H4,
        ModelId::TJz,
    ];

    pub fn local_dim(self) -> usize {
        match self {
            ModelId::U1Half | ModelId::DipHalfW4W5 => 2,
            _ => 3,
        }
    }

    /// Value of the probed operator (Z or S^z) on a local state.
    ///
    /// spin-1/2: 0 -> -1, 1 -> +1; spin-1: 0,1,2 -> -1,0,+1;
    /// t-Jz: hole, up, down -> 0, +1, -1.
    pub fn observable(self, state: u8) -> i8 {
        match self {
            ModelId::U1Half | ModelId::DipHalfW4W5 => 2 * state as i8 - 1,
            ModelId::DipOneH3 | ModelId::DipOneH3H4 => state as i8 - 1,
            ModelId::TJz => [0, 1, -1][state as usize],
        }
    }

    /// Charge density used for conservation checks.
    pub fn charge(self, state: u8) -> i64 {
        match self {
            ModelId::TJz => (state != 0) as i64,
            _ => self.observable(state) as i64,
        }
    }

    pub fn conserves_dipole(self) -> bool {
        matches!(self, ModelId::DipHalfW4W5 | ModelId::DipOneH3 | ModelId::DipOneH3H4)
    }

    /// Minimal system size that holds every gate family.
    pub fn min_span(self) -> usize {
        match self {
            ModelId::U1Half | ModelId::TJz => 2,
            ModelId::DipHalfW4W5 => 5,
            ModelId::DipOneH3 => 3,
            ModelId::DipOneH3H4 => 4,
        }
    }

    /// `<O^2>` at infinite temperature.
    pub fn variance(self) -> f64 {
        if self.local_dim() == 2 {
            1.0
        } else {
            2.0 / 3.0
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelId::U1Half => "U1_half",
            ModelId::DipHalfW4W5 => "Dip_half_W4W5",
            ModelId::DipOneH3 => "Dip_one_H3",
            ModelId::DipOneH3H4 => "Dip_one_H3H4",
            ModelId::TJz => "TJz",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        Ok(match key.as_str() {
            "u1half" | "u1" => ModelId::U1Half,
            "diphalfw4w5" | "w4w5" | "diphalf" => ModelId::DipHalfW4W5,
            "diponeh3" | "h3" => ModelId::DipOneH3,
            "diponeh3h4" | "h3h4" => ModelId::DipOneH3H4,
            "tjz" => ModelId::TJz,
            _ => return Err(validation("model", format!("unknown model `{s}`"))),
        })
    }
}

/// How the impurity acts on its sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpurityKind {
    /// Independent spin flips on each listed site (m = 2).  One site breaks
    /// the U(1) charge; three consecutive sites fully break the dipole
    /// symmetry.
    Flip,
    /// Swap of the two listed neighbouring spin-1/2 sites: breaks the
    /// dipole moment while conserving the charge.
    Swap,
    /// Uniform resampling of each listed site among its three states (m = 3).
    Resample,
}

impl FromStr for ImpurityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "flip" | "site_flip" | "full_breaking" | "charge_breaking" => Ok(ImpurityKind::Flip),
            "swap" | "charge_preserving" | "charge_preserving_swap" => Ok(ImpurityKind::Swap),
            "resample" | "state_flip" => Ok(ImpurityKind::Resample),
            _ => Err(validation("impurity.kind", format!("unknown impurity kind `{s}`"))),
        }
    }
}

impl fmt::Display for ImpurityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImpurityKind::Flip => "flip",
            ImpurityKind::Swap => "swap",
            ImpurityKind::Resample => "resample",
        })
    }
}

/// Impurity placement; `sites` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImpuritySpec {
    pub kind: ImpurityKind,
    pub sites: Vec<usize>,
}

impl ImpuritySpec {
    pub fn new(kind: ImpurityKind, sites: &[usize]) -> Self {
        Self { kind, sites: sites.to_vec() }
    }

    pub fn describe(spec: Option<&ImpuritySpec>) -> String {
        match spec {
            None => "none".to_string(),
            Some(s) => format!(
                "{}@{}",
                s.kind,
                s.sites.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }
}
