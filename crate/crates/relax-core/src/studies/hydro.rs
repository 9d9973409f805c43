use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Measurement;
use crate::continuum::{biharmonic_modes, BcKind};
use crate::error::Result;
use crate::hydro::{
    build_dipole, build_u1, continuum_overlap, dipole_lattice_d, lowest_nonzero_modes, spectral_correlation, Boundary,
    DipoleImpurity, SiteImpurity, J4_DEFAULT, J5_DEFAULT,
};
use crate::series::{crossover_time, fit_power_law, log_grid, scaling_exponent, PowerLawFit, POINTS_PER_DECADE};
use crate::special::gamma;

/// Probe sites of the U(1) crossover (impurity at site 1).
pub const CROSSOVER_PROBES: [usize; 5] = [4, 8, 16, 32, 64];
/// Probe sites of the dipole front (wall left of site 1).
pub const FRONT_PROBES: [usize; 4] = [16, 32, 64, 128];

const DIPOLE_L: usize = 2000;

/// Early bulk law, late boundary law per probe and their crossings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverStudy {
    pub l: usize,
    pub early: PowerLawFit,
    /// `(j, late fit, t_tran)`.
    pub probes: Vec<(usize, PowerLawFit, f64)>,
    pub tran_exponent: f64,
}

impl CrossoverStudy {
    pub fn measurements(&self) -> Vec<Measurement> {
        let mut m = vec![Measurement::within("early exponent", self.early.exponent, -0.5, 0.03)];
        for (j, late, _) in &self.probes {
            m.push(Measurement::within(format!("late exponent j={j}"), late.exponent, -1.5, 0.05));
        }
        m.push(Measurement::within("t_tran exponent in j", self.tran_exponent, 2.0, 0.1));
        m
    }
}

/// U(1) open chain of `l` sites with an on-site impurity `g` at site 1.
/// Distance `x = j - 1`; early window `[2, x_max^2/80]` on the farthest
/// probe, late windows `[5 x^2, l^2/500]`.
pub fn u1_crossover(l: usize, g: f64, probes: &[usize]) -> Result<CrossoverStudy> {
    let h = build_u1(l, Boundary::Open, Some(SiteImpurity { site: 1, g }))?;
    let t_hi = (l * l) as f64 / 500.0;
    let times = log_grid(1.0, t_hi, POINTS_PER_DECADE);
    let pairs: Vec<(usize, usize)> = probes.iter().map(|&j| (j, j)).collect();
    let series = spectral_correlation(&h, &pairs, &times)?;
    let far = probes.iter().copied().max().unwrap_or(2);
    let xf = (far - 1) as f64;
    let far_series = &series[probes.iter().position(|&j| j == far).unwrap_or(0)];
    let early = fit_power_law(far_series, 2.0, xf * xf / 80.0)?;
    let mut rows = Vec::new();
    for (s, &j) in series.iter().zip(probes) {
        let x = (j - 1) as f64;
        let late = fit_power_law(s, 40.0 * x * x / 8.0, t_hi)?;
        rows.push((j, late, crossover_time(&early, &late)));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0 as f64).collect();
    let ts: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(CrossoverStudy { l, early, probes: rows, tran_exponent: scaling_exponent(&xs, &ts) })
}

pub fn u1_ring_spectrum() -> Result<Vec<Measurement>> {
    let l = 64;
    let ev = build_u1(l, Boundary::Periodic, None)?.eigenvalues()?;
    let mut want: Vec<f64> = (0..l).map(|n| 16.0 * (1.0 - (2.0 * PI * n as f64 / l as f64).cos())).collect();
    want.sort_by(f64::total_cmp);
    let err = ev.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(vec![Measurement::at_most("max |E_n - 16(1 - cos 2 pi n/L)|, L=64", err, 1e-10)])
}

pub fn dipole_modes() -> Result<Vec<Measurement>> {
    let mut m = Vec::new();
    let fam = biharmonic_modes(1000.0, BcKind::Symmetric, 2)?;
    m.push(Measurement::within("k_1 L/pi", fam.roots[0] * 1000.0 / PI, 1.50562, 1e-5));
    m.push(Measurement::within("k_2 L/pi", fam.roots[1] * 1000.0 / PI, 2.49975, 1e-5));
    let l = 1000;
    let cases = [
        (DipoleImpurity::None, BcKind::Symmetric),
        (DipoleImpurity::ChargePreserving { g: 1.0 }, BcKind::ChargePreserving),
        (DipoleImpurity::FullBreaking { g: 1.0 }, BcKind::FullyBreaking),
    ];
    for (imp, kind) in cases {
        let h = build_dipole(l, J4_DEFAULT, J5_DEFAULT, imp)?;
        let modes = lowest_nonzero_modes(&h, kind.zero_mode_count(), 3)?;
        let fam = biharmonic_modes(l as f64, kind, 3)?;
        for (n, (_, phi)) in modes.iter().enumerate() {
            m.push(Measurement::at_least(
                format!("{kind:?} mode {} overlap, L=1000", n + 1),
                continuum_overlap(phi, &fam, n, 25),
                0.999,
            ));
        }
    }
    Ok(m)
}

/// Bulk amplitude `Gamma(1/4) / (4 pi)` of `C (D t)^{1/4}`.
pub fn dipole_bulk_amplitude() -> f64 {
    gamma(0.25) / (4.0 * PI)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleStudy {
    pub l: usize,
    pub d: f64,
    /// Bulk law on the farthest front probe before the front arrives.
    pub early: PowerLawFit,
    /// Charge-preserving wall, probe 16, after the front.
    pub late_preserving: PowerLawFit,
    /// Late amplitude of `C (Dt)^{1/4}` over the bulk one.
    pub amplitude_ratio: f64,
    /// `(j, t_front)`.
    pub fronts: Vec<(usize, f64)>,
    pub front_exponent: f64,
    /// Fully-breaking wall, probe 4.
    pub late_breaking: PowerLawFit,
}

impl DipoleStudy {
    pub fn measurements(&self) -> Vec<Measurement> {
        vec![
            Measurement::within("charge-preserving early exponent", self.early.exponent, -0.25, 0.03),
            Measurement::within("charge-preserving late exponent", self.late_preserving.exponent, -0.25, 0.03),
            Measurement::within("late/bulk amplitude ratio", self.amplitude_ratio, 2.0, 0.2),
            Measurement::within("t_front exponent in j", self.front_exponent, 4.0, 0.3),
            Measurement::within("fully-breaking late exponent", self.late_breaking.exponent, -1.25, 0.08),
        ]
    }
}

/// Dipole chain of 2000 sites.  Windows in units of `x^4/D` with `x = j`:
/// early `[10, x^4/(1000 D)]`, late `[1000 x^4/D, L^4/(10^4 D)]`.  The
/// front is the first grid time at which `C (Dt)^{1/4}` exceeds `sqrt 2`
/// times the bulk amplitude.
pub fn dipole_exponents() -> Result<DipoleStudy> {
    let l = DIPOLE_L;
    let d = dipole_lattice_d(J4_DEFAULT, J5_DEFAULT);
    let t_hi = (l as f64).powi(4) / (1e4 * d);
    let times = log_grid(1.0, t_hi, POINTS_PER_DECADE);
    let quartic = |j: usize| (j as f64).powi(4) / d;

    let cp = build_dipole(l, J4_DEFAULT, J5_DEFAULT, DipoleImpurity::ChargePreserving { g: 1.0 })?;
    let late_probe = FRONT_PROBES[0];
    let pairs: Vec<(usize, usize)> = FRONT_PROBES.iter().map(|&j| (j, j)).collect();
    let series = spectral_correlation(&cp, &pairs, &times)?;
    let far = *FRONT_PROBES.last().unwrap();
    let early = fit_power_law(series.last().unwrap(), 10.0, quartic(far) / 1e3)?;
    let late_preserving = fit_power_law(&series[0], 1e3 * quartic(late_probe), t_hi)?;
    let bulk = dipole_bulk_amplitude();
    let amplitude_ratio = late_preserving.eval(t_hi) * (d * t_hi).powf(0.25) / bulk;
    let mut fronts = Vec::new();
    for (s, &j) in series.iter().zip(&FRONT_PROBES) {
        let hit = s
            .times
            .iter()
            .zip(&s.values)
            .find(|(t, c)| *c * (d * *t).powf(0.25) > std::f64::consts::SQRT_2 * bulk)
            .map(|(t, _)| *t)
            .unwrap_or(f64::NAN);
        fronts.push((j, hit));
    }
    let xs: Vec<f64> = fronts.iter().map(|f| f.0 as f64).collect();
    let ts: Vec<f64> = fronts.iter().map(|f| f.1).collect();

    let fb = build_dipole(l, J4_DEFAULT, J5_DEFAULT, DipoleImpurity::FullBreaking { g: 1.0 })?;
    let probe = 4;
    let s = spectral_correlation(&fb, &[(probe, probe)], &times)?;
    let late_breaking = fit_power_law(&s[0], 1e3 * quartic(probe), t_hi)?;
    Ok(DipoleStudy {
        l,
        d,
        early,
        late_preserving,
        amplitude_ratio,
        front_exponent: scaling_exponent(&xs, &ts),
        fronts,
        late_breaking,
    })
}
