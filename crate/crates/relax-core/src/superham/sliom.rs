use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::DEFAULT_SUPER_CAP;
use crate::automaton::decode;
use crate::error::{Error, Result};

/// Trial state and the impurity it probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SliomProbe {
    /// t-Jz `|q_k)` (spin of the k-th particle) with a state-flip impurity
    /// at site `j_s`.
    TJz { k: usize, j_s: usize },
    /// H3 left charge (sign of the first non-zero spin) with the two-site
    /// impurity on sites `L-1, L`.
    H3Left,
    /// H3 blockade `B++ - B--` on sites `j0, j0+1` with the two-site
    /// boundary impurity.
    H3Blockade { j0: usize },
}

impl SliomProbe {
    fn check(self, l: usize) -> Result<()> {
        let ok = match self {
            SliomProbe::TJz { k, j_s } => (1..=l).contains(&k) && (1..=l).contains(&j_s),
            SliomProbe::H3Left => l >= 3,
            SliomProbe::H3Blockade { j0 } => j0 >= 1 && j0 + 3 <= l,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainError(format!("{self:?} is not defined at L={l}")))
        }
    }
}

pub(crate) fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

fn pow_big(base: u32, e: usize) -> BigUint {
    BigUint::from(base).pow(e as u32)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `(q_k|q_k)` and `sum_c (sum_s q_k(c; s at j))^2` over the rest `c`
/// for a state-flip at `j`, by counting patterns left and right of `j`.
fn tjz_flip_sums(l: usize, k: usize, j: usize) -> (BigUint, BigUint) {
    let norm: BigUint = (k..=l).map(|m| pow_big(2, m) * binom(l, m)).sum();
    let left = |a: usize| binom(j - 1, a) * pow_big(2, a);
    let right = |b: usize| binom(l - j, b) * pow_big(2, b);
    let mut fsum = BigUint::zero();
    for a in 0..j {
        for b in 0..=l - j {
            let s: u32 = if a >= k {
                9
            } else if a + 1 == k {
                u32::from(b >= 1)
            } else if b >= k - a {
                5
            } else if b + 1 == k - a {
                4
            } else {
                0
            };
            if s > 0 {
                fsum += left(a) * right(b) * BigUint::from(s);
            }
        }
    }
    (norm, fsum)
}

/// Exact `(q|V|q)/(q|q)` at `g = 1` in closed form.  The blockade uses the
/// quoted `8/(3^{L-j0-1} - 1)`, an upper bound on the explicit-vector value
/// returned by [`blockade_energy_exact`].
pub fn sliom_variational_exact(l: usize, probe: SliomProbe) -> Result<BigRational> {
    probe.check(l)?;
    Ok(match probe {
        SliomProbe::TJz { k, j_s } => {
            let (norm, fsum) = tjz_flip_sums(l, k, j_s);
            // (3/2) (1 - fsum / (3 norm))
            let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
            three_halves - ratio(fsum, norm * BigUint::from(2u32))
        }
        SliomProbe::H3Left => ratio(BigUint::from(14u32), pow_big(3, l) - BigUint::one()),
        SliomProbe::H3Blockade { j0 } => ratio(BigUint::from(8u32), pow_big(3, l - j0 - 1) - BigUint::one()),
    })
}

/// `g` times [`sliom_variational_exact`].
pub fn sliom_variational_energy(l: usize, probe: SliomProbe, g: f64) -> Result<f64> {
    Ok(g * sliom_variational_exact(l, probe)?.to_f64().unwrap_or(f64::NAN))
}

/// Upper bound on `|d C_q / dt|` for the normalised SLIOM correlation,
/// which equals the variational energy.
pub fn sliom_decay_bound(l: usize, probe: SliomProbe, g: f64) -> Result<f64> {
    sliom_variational_energy(l, probe, g)
}

/// Blockade trial energy from the explicit vector: `8g/(3^{L-j0-1} + 1)`.
pub fn blockade_energy_exact(l: usize, j0: usize, g: f64) -> Result<f64> {
    SliomProbe::H3Blockade { j0 }.check(l)?;
    Ok(8.0 * g / (3f64.powi((l - j0 - 1) as i32) + 1.0))
}

/// Large-`L` form of the t-Jz trial energy with the impurity at `L`,
/// `(3g/sqrt(8 pi)) sqrt(k) e^{-f(k/L) L} / sqrt(L (L-k))`.
pub fn tjz_variational_asymptotic(l: usize, k: usize, g: f64) -> f64 {
    let (lf, kf) = (l as f64, k as f64);
    let a = kf / lf;
    let f = 3f64.ln() - a * 2f64.ln() + a * a.ln() + (1.0 - a) * (1.0 - a).ln();
    3.0 * g / (8.0 * PI).sqrt() * kf.sqrt() * (-f * lf).exp() / (lf * (lf - kf)).sqrt()
}

fn check_cap(l: usize) -> Result<usize> {
    let size = 3u128.pow(l as u32);
    if size > DEFAULT_SUPER_CAP {
        return Err(Error::SizeError { size, cap: DEFAULT_SUPER_CAP });
    }
    Ok(size as usize)
}

/// Explicit unnormalised `|q_k)` on `3^L` configurations (hole, up, down
/// = 0, 1, 2): the spin of the k-th particle, zero with fewer particles.
pub fn tjz_qk_vector(l: usize, k: usize) -> Result<Vec<f64>> {
    let n = check_cap(l)?;
    Ok((0..n)
        .map(|idx| match decode(idx, 3, l).into_iter().filter(|&s| s != 0).nth(k - 1) {
            Some(1) => 1.0,
            Some(_) => -1.0,
            None => 0.0,
        })
        .collect())
}

/// Normalised `|k,l)`: `count` particles with the spin of the k-th kept
/// (`k = 0` gives the symmetric sum).
pub fn tjz_kl_vector(l: usize, k: usize, count: usize) -> Result<Vec<f64>> {
    let n = check_cap(l)?;
    let mut v: Vec<f64> = (0..n)
        .map(|idx| {
            let p: Vec<u8> = decode(idx, 3, l).into_iter().filter(|&s| s != 0).collect();
            match (p.len() == count, k) {
                (false, _) => 0.0,
                (true, 0) => 1.0,
                (true, k) if p[k - 1] == 1 => 1.0,
                _ => -1.0,
            }
        })
        .collect();
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    Ok(v)
}

/// Sign of the first non-zero H3 spin (states minus, zero, plus = 0, 1, 2).
pub fn h3_left_vector(l: usize) -> Result<Vec<f64>> {
    let n = check_cap(l)?;
    Ok((0..n)
        .map(|idx| match decode(idx, 3, l).into_iter().find(|&s| s != 1) {
            Some(2) => 1.0,
            Some(_) => -1.0,
            None => 0.0,
        })
        .collect())
}

/// `B++ - B--` on sites `j0, j0+1` (1-based): both sites equal to the
/// blockade spin and the nearest non-zero spins outside it agree with it.
pub fn h3_blockade_vector(l: usize, j0: usize) -> Result<Vec<f64>> {
    let n = check_cap(l)?;
    SliomProbe::H3Blockade { j0 }.check(l)?;
    Ok((0..n)
        .map(|idx| {
            let c = decode(idx, 3, l);
            let ch = c[j0 - 1];
            if ch == 1 || c[j0] != ch {
                return 0.0;
            }
            let left = c[..j0 - 1].iter().rev().find(|&&s| s != 1);
            let right = c[j0 + 1..].iter().find(|&&s| s != 1);
            if left.is_some_and(|&s| s != ch) || right.is_some_and(|&s| s != ch) {
                return 0.0;
            }
            if ch == 2 {
                1.0
            } else {
                -1.0
            }
        })
        .collect())
}

/// A SLIOM trial state.  t-Jz states carry their coefficients in the
/// `|k,l)` basis (`l = 0..=L`, zero for `l < k`); H3 states carry the
/// explicit composite vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliomState {
    pub l: usize,
    pub probe: SliomProbe,
    pub coefficients: Vec<f64>,
}

impl SliomState {
    /// `|q_k)` with coefficients `sqrt(2^l C(L,l))` for `l >= k`.
    pub fn tjz(l: usize, k: usize) -> Result<Self> {
        let probe = SliomProbe::TJz { k, j_s: l };
        probe.check(l)?;
        let coefficients = (0..=l)
            .map(|m| if m < k { 0.0 } else { (pow_big(2, m) * binom(l, m)).to_f64().unwrap().sqrt() })
            .collect();
        Ok(Self { l, probe, coefficients })
    }

    pub fn h3_left(l: usize) -> Result<Self> {
        Ok(Self { l, probe: SliomProbe::H3Left, coefficients: h3_left_vector(l)? })
    }

    pub fn h3_blockade(l: usize, j0: usize) -> Result<Self> {
        Ok(Self { l, probe: SliomProbe::H3Blockade { j0 }, coefficients: h3_blockade_vector(l, j0)? })
    }

    /// The state as a vector on the `3^L` composite configurations.
    pub fn embedded(&self) -> Result<Vec<f64>> {
        match self.probe {
            SliomProbe::TJz { k, .. } => {
                let mut v = vec![0.0; check_cap(self.l)?];
                for m in k..=self.l {
                    for (x, y) in v.iter_mut().zip(tjz_kl_vector(self.l, k, m)?) {
                        *x += self.coefficients[m] * y;
                    }
                }
                Ok(v)
            }
            _ => Ok(self.coefficients.clone()),
        }
    }
}
