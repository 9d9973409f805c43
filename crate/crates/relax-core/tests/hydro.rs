use std::f64::consts::PI;

use nalgebra::DVector;
use proptest::prelude::*;
use relax_core::continuum::{biharmonic_modes, BcKind};
use relax_core::hydro::*;
use relax_core::series::scaling_exponent;
use relax_core::Error;

fn dipole(l: usize, imp: DipoleImpurity) -> relax_core::BandedOperator {
    build_dipole(l, J4_DEFAULT, J5_DEFAULT, imp).unwrap()
}

#[test]
fn ring_matches_cosine_band() {
    let l = 64;
    let h = build_u1(l, Boundary::Periodic, None).unwrap();
    let mut want: Vec<f64> = (0..l).map(|n| 16.0 * (1.0 - (2.0 * PI * n as f64 / l as f64).cos())).collect();
    want.sort_by(f64::total_cmp);
    for (a, b) in h.eigenvalues().unwrap().iter().zip(&want) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn conserved_vectors_are_zero_modes() {
    let h = build_u1(30, Boundary::Open, None).unwrap();
    assert!(h.matvec(&[1.0; 30]).iter().all(|v| v.abs() < 1e-13));
    let h = dipole(40, DipoleImpurity::None);
    assert!(h.matvec(&[1.0; 40]).iter().all(|v| v.abs() < 1e-13));
    let ramp: Vec<f64> = (1..=40).map(|j| j as f64).collect();
    assert!(h.matvec(&ramp).iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn zero_mode_bookkeeping() {
    let cases = [
        (build_u1(24, Boundary::Open, None).unwrap(), 1),
        (build_u1(24, Boundary::Open, Some(SiteImpurity { site: 3, g: 0.5 })).unwrap(), 0),
        (dipole(24, DipoleImpurity::None), 2),
        (dipole(24, DipoleImpurity::ChargePreserving { g: 1.0 }), 1),
        (dipole(24, DipoleImpurity::FullBreaking { g: 1.0 }), 0),
    ];
    for (k, (h, zeros)) in cases.iter().enumerate() {
        assert_eq!(zero_mode_count(h).unwrap(), *zeros, "case {k}");
    }
}

#[test]
fn construction_errors() {
    assert!(matches!(build_dipole(7, 1.0, 1.0, DipoleImpurity::None), Err(Error::SpanError { .. })));
    assert!(build_u1(1, Boundary::Open, None).is_err());
    assert!(build_u1(10, Boundary::Open, Some(SiteImpurity { site: 11, g: 1.0 })).is_err());
    let h = build_u1(10, Boundary::Open, None).unwrap();
    assert!(spectral_correlation(&h, &[(0, 1)], &[1.0]).is_err());
    assert!(spectral_correlation(&h, &[(1, 1)], &[-1.0]).is_err());
}

#[test]
fn correlation_starts_as_delta() {
    let h = dipole(30, DipoleImpurity::ChargePreserving { g: 0.7 });
    let pairs = [(1, 1), (4, 9), (15, 15), (30, 2)];
    for s in spectral_correlation(&h, &pairs, &[0.0]).unwrap() {
        let want = if s.site == s.source { 1.0 } else { 0.0 };
        assert!((s.values[0] - want).abs() < 1e-12);
    }
}

fn expm_column(h: &relax_core::BandedOperator, t: f64, j0: usize) -> DVector<f64> {
    let m = (h.to_dense() * -t).exp();
    m.column(j0 - 1).into_owned()
}

#[test]
fn spectral_sum_matches_matrix_exponential() {
    let ops = [
        build_u1(50, Boundary::Open, Some(SiteImpurity { site: 1, g: 1.0 })).unwrap(),
        build_u1(33, Boundary::Periodic, None).unwrap(),
        dipole(40, DipoleImpurity::None),
        dipole(45, DipoleImpurity::FullBreaking { g: 2.0 }),
    ];
    let times = [0.01, 0.3, 2.0, 25.0];
    for h in &ops {
        let n = h.dim();
        let pairs: Vec<(usize, usize)> = (1..=n).step_by(7).map(|j| (j, 5)).collect();
        let series = spectral_correlation(h, &pairs, &times).unwrap();
        for (k, &t) in times.iter().enumerate() {
            let col = expm_column(h, t, 5);
            for s in &series {
                assert!((s.values[k] - col[s.site - 1]).abs() < 1e-8, "n={n} t={t} j={}", s.site);
            }
        }
    }
}

#[test]
fn bulk_obeys_lattice_diffusion() {
    // 8th-order central difference in time against 8 (C_{j+1} - 2 C_j + C_{j-1}).
    let l = 60;
    let h = build_u1(l, Boundary::Open, Some(SiteImpurity { site: 1, g: 1.0 })).unwrap();
    let (t, dt) = (3.0, 1e-3);
    let stencil = [1.0 / 280.0, -4.0 / 105.0, 0.2, -0.8, 0.0, 0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0];
    let times: Vec<f64> = (-4..=4).map(|k| t + k as f64 * dt).collect();
    let pairs: Vec<(usize, usize)> = (1..=l).map(|j| (j, 30)).collect();
    let series = spectral_correlation(&h, &pairs, &times).unwrap();
    for j in 10..50 {
        let dcdt: f64 = stencil.iter().enumerate().map(|(k, w)| w * series[j].values[k]).sum::<f64>() / dt;
        let lap = 8.0 * (series[j + 1].values[4] - 2.0 * series[j].values[4] + series[j - 1].values[4]);
        assert!((dcdt - lap).abs() < 1e-10, "j={} {dcdt} {lap}", j + 1);
    }
}

#[test]
fn open_chain_gap_scales_diffusively() {
    let ls = [400.0, 800.0, 1600.0];
    let gaps: Vec<f64> = ls
        .iter()
        .map(|&l| {
            let h = build_u1(l as usize, Boundary::Open, Some(SiteImpurity { site: 1, g: 1.0 })).unwrap();
            h.lowest(1).unwrap().energies[0]
        })
        .collect();
    let z = scaling_exponent(&ls, &gaps);
    assert!((z + 2.0).abs() < 0.05, "exponent {z}");
}

#[test]
fn magnetization_limits() {
    let times = [0.0, 1.0, 100.0, 1e4];
    let free = magnetization_from_modes(&build_u1(40, Boundary::Open, None).unwrap(), &times).unwrap();
    assert!(free.values.iter().all(|v| (v / 40.0 - 1.0).abs() < 1e-10), "{:?}", free.values);
    let h = build_u1(40, Boundary::Open, Some(SiteImpurity { site: 1, g: 1.0 })).unwrap();
    let m = magnetization_from_modes(&h, &[0.0, 1.0, 100.0, 1e4, 1e7]).unwrap();
    assert!((m.values[0] - 40.0).abs() < 1e-9);
    assert!(m.values.windows(2).all(|w| w[1] < w[0]));
    assert!(m.values[4] < 1e-10);
}

#[test]
fn two_boundary_sinks_follow_odd_modes() {
    let l = 200;
    let mut h = build_u1(l, Boundary::Open, Some(SiteImpurity { site: 1, g: 1e6 })).unwrap();
    h.add(l - 1, l - 1, 4e6);
    let times = [2e3, 1e4, 5e4];
    let m = magnetization_from_modes(&h, &times).unwrap();
    for (k, &t) in times.iter().enumerate() {
        let lf = (l - 1) as f64;
        let want: f64 = (1..400)
            .step_by(2)
            .map(|n| {
                let q = PI * n as f64 / lf;
                (-8.0 * q * q * t).exp() * 8.0 * lf / (PI * PI * (n * n) as f64)
            })
            .sum();
        assert!((m.values[k] / want - 1.0).abs() < 0.02, "t={t}: {} vs {want}", m.values[k]);
    }
}

#[test]
fn breaking_modes_vanish_at_wall() {
    let mut edge = vec![];
    for l in [250, 500, 1000] {
        let h = dipole(l, DipoleImpurity::FullBreaking { g: 1.0 });
        let (_, phi) = &lowest_nonzero_modes(&h, 0, 1).unwrap()[0];
        let peak = phi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        edge.push((phi[0].abs() / peak, (phi[1] - phi[0]).abs() / peak));
    }
    assert!(edge.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1), "{edge:?}");
    assert!(edge[2].0 < 1e-2 && edge[2].1 < 1e-2);
}

#[test]
fn lattice_modes_match_continuum_families() {
    let l = 1000;
    let cases = [
        (DipoleImpurity::None, BcKind::Symmetric, 2),
        (DipoleImpurity::ChargePreserving { g: 1.0 }, BcKind::ChargePreserving, 1),
        (DipoleImpurity::FullBreaking { g: 1.0 }, BcKind::FullyBreaking, 0),
    ];
    for (imp, kind, zeros) in cases {
        let modes = lowest_nonzero_modes(&dipole(l, imp), zeros, 3).unwrap();
        let fam = biharmonic_modes(l as f64, kind, 3).unwrap();
        for (n, (_, phi)) in modes.iter().enumerate() {
            let ov = continuum_overlap(phi, &fam, n, 25);
            assert!(ov >= 0.999, "{kind:?} mode {n}: {ov}");
        }
    }
}

#[test]
fn eigenmode_table_layout() {
    let h = dipole(12, DipoleImpurity::None);
    let table = eigenmode_table(&lowest_nonzero_modes(&h, 2, 3).unwrap());
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "j,phi_1,phi_2,phi_3");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("1,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operators_are_positive_semidefinite(l in 8usize..40, g in 0.0f64..5.0, j4 in 0.0f64..2.0, j5 in 0.0f64..2.0, which in 0usize..4) {
        let h = match which {
            0 => build_u1(l, Boundary::Open, Some(SiteImpurity { site: 1 + l / 3, g })).unwrap(),
            1 => build_dipole(l, j4, j5, DipoleImpurity::None).unwrap(),
            2 => build_dipole(l, j4, j5, DipoleImpurity::ChargePreserving { g }).unwrap(),
            _ => build_dipole(l, j4, j5, DipoleImpurity::FullBreaking { g }).unwrap(),
        };
        let ev = h.eigenvalues().unwrap();
        prop_assert!(ev[0] >= -1e-10 * h.norm_bound());
    }

    #[test]
    fn correlation_is_symmetric(l in 8usize..30, a in 1usize..8, b in 1usize..8, t in 0.0f64..50.0) {
        let h = build_dipole(l, 1.0, 0.5, DipoleImpurity::ChargePreserving { g: 1.0 }).unwrap();
        let s = spectral_correlation(&h, &[(a, b), (b, a)], &[t]).unwrap();
        prop_assert!((s[0].values[0] - s[1].values[0]).abs() < 1e-12);
    }
}
