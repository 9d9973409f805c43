use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::integrate;

/// Left-boundary condition of the biharmonic problem on `[0, L]`; the
/// right end always conserves charge and dipole (`phi'' = phi''' = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcKind {
    /// `phi'' = phi''' = 0` at both ends; roots of `cos kL cosh kL = 1`.
    Symmetric,
    /// `phi' = phi''' = 0` at the left end; roots of `tan kL = -tanh kL`.
    ChargePreserving,
    /// `phi = phi' = 0` at the left end; roots of `cos kL cosh kL = -1`.
    FullyBreaking,
}

impl BcKind {
    /// Quantisation condition divided by `cosh kL`.
    pub fn condition(self, u: f64) -> f64 {
        match self {
            BcKind::Symmetric => u.cos() - 1.0 / u.cosh(),
            BcKind::ChargePreserving => u.sin() + u.cos() * u.tanh(),
            BcKind::FullyBreaking => u.cos() + 1.0 / u.cosh(),
        }
    }

    fn bracket(self, n: usize) -> (f64, f64) {
        let n = n as f64;
        match self {
            BcKind::Symmetric => (n * PI, (n + 1.0) * PI),
            BcKind::ChargePreserving => ((n - 0.5) * PI, n * PI),
            BcKind::FullyBreaking => ((n - 1.0) * PI, n * PI),
        }
    }

    pub fn zero_mode_count(self) -> usize {
        match self {
            BcKind::Symmetric => 2,
            BcKind::ChargePreserving => 1,
            BcKind::FullyBreaking => 0,
        }
    }
}

/// The lowest `n` nonzero modes of `d^4 phi = k^4 phi` on `[0, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeFamily {
    pub kind: BcKind,
    pub l: f64,
    /// Wavenumbers `k_n`, ascending.
    pub roots: Vec<f64>,
    /// Coefficient of the odd part (`A = cos kL / cosh kL` for the
    /// charge-preserving family, whose mode is `cos kx + A cosh kx`).
    pub gammas: Vec<f64>,
    pub norms: Vec<f64>,
    /// `|condition(k_n L)|`.
    pub residuals: Vec<f64>,
}

fn bisect(kind: BcKind, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (kind.condition(a), kind.condition(b));
    if fa * fb > 0.0 {
        return Err(Error::RootFindFailure { lo, hi, reason: format!("no sign change ({fa:e}, {fb:e})") });
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if kind.condition(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Unnormalised mode at `q = k x` for `u = k L`, written with
/// `exp(q - u)` factors so that no term grows like `cosh u`.
fn shape(kind: BcKind, q: f64, u: f64) -> f64 {
    let (c, s) = (u.cos(), u.sin());
    let eu = (-u).exp();
    let grow = (q - u).exp() - (-q - u).exp();
    match kind {
        BcKind::Symmetric => {
            let den = 1.0 - eu * eu - 2.0 * s * eu;
            q.cos() + gamma_of(kind, u) * q.sin() + (-q).exp() + (c - s - eu) * grow / den
        }
        BcKind::FullyBreaking => {
            let den = 1.0 - eu * eu + 2.0 * s * eu;
            q.cos() + gamma_of(kind, u) * q.sin() - (-q).exp() - (s - c - eu) * grow / den
        }
        BcKind::ChargePreserving => {
            q.cos() + c * ((q - u).exp() + (-q - u).exp()) / (1.0 + eu * eu)
        }
    }
}

fn gamma_of(kind: BcKind, u: f64) -> f64 {
    let (c, s, eu) = (u.cos(), u.sin(), (-u).exp());
    match kind {
        BcKind::Symmetric => (2.0 * c * eu - 1.0 - eu * eu) / (1.0 - eu * eu - 2.0 * s * eu),
        BcKind::FullyBreaking => -(2.0 * c * eu + 1.0 + eu * eu) / (1.0 - eu * eu + 2.0 * s * eu),
        BcKind::ChargePreserving => 2.0 * c * eu / (1.0 + eu * eu),
    }
}

/// Root-finds and normalises the lowest `n_modes` nonzero modes.
pub fn biharmonic_modes(l: f64, kind: BcKind, n_modes: usize) -> Result<ModeFamily> {
    if !(l > 0.0) || n_modes == 0 {
        return Err(Error::DomainError("need L > 0 and n_modes >= 1".into()));
    }
    let mut fam = ModeFamily { kind, l, roots: vec![], gammas: vec![], norms: vec![], residuals: vec![] };
    for n in 1..=n_modes {
        let (lo, hi) = kind.bracket(n);
        let u = bisect(kind, lo, hi)?;
        let res = kind.condition(u).abs();
        if res > 1e-10 {
            return Err(Error::RootFindFailure { lo, hi, reason: format!("residual {res:e}") });
        }
        let k = u / l;
        let sq = integrate(&|x: f64| shape(kind, k * x, u).powi(2), 0.0, l, 4 * (n + 2), 1e-14 * l)?;
        fam.roots.push(k);
        fam.gammas.push(gamma_of(kind, u));
        fam.norms.push(1.0 / sq.sqrt());
        fam.residuals.push(res);
    }
    Ok(fam)
}

impl ModeFamily {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Normalised nonzero mode `n` (0-based) at `x`.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        let k = self.roots[n];
        self.norms[n] * shape(self.kind, k * x, k * self.l)
    }

    /// Orthonormal zero modes: `1/sqrt L` and, for the symmetric family,
    /// the centred linear mode.
    pub fn zero_modes(&self, x: f64) -> Vec<f64> {
        let l = self.l;
        match self.kind {
            BcKind::Symmetric => vec![1.0 / l.sqrt(), (x - 0.5 * l) * (12.0 / l.powi(3)).sqrt()],
            BcKind::ChargePreserving => vec![1.0 / l.sqrt()],
            BcKind::FullyBreaking => vec![],
        }
    }

    /// `sum_n exp(-D k_n^4 t) phi_n(x) phi_n(x0)` including zero modes.
    pub fn spectral_sum(&self, x: f64, x0: f64, d: f64, t: f64) -> f64 {
        let zero: f64 = self.zero_modes(x).iter().zip(self.zero_modes(x0)).map(|(a, b)| a * b).sum();
        zero + (0..self.len())
            .map(|n| (-d * self.roots[n].powi(4) * t).exp() * self.eval(n, x) * self.eval(n, x0))
            .sum::<f64>()
    }
}
