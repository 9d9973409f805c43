use proptest::prelude::*;
use relax_core::automaton::{build_gate_set, enumerate_krylov, ImpurityKind, ImpuritySpec, ModelId};
use relax_core::linalg::dense_eigen;
use relax_core::superham::*;
use relax_core::SparseOperator;

const CAP: u128 = DEFAULT_SUPER_CAP;

fn resample(sites: &[usize]) -> ImpuritySpec {
    ImpuritySpec::new(ImpurityKind::Resample, sites)
}

fn op(model: ModelId, l: usize, imp: Option<&ImpuritySpec>) -> SparseOperator {
    build_super_hamiltonian(model, l, imp, 1.0, CAP).unwrap()
}

fn impurity_part(model: ModelId, l: usize, imp: &ImpuritySpec) -> SparseOperator {
    let with = op(model, l, Some(imp)).to_dense();
    let without = op(model, l, None).to_dense();
    let d = with - without;
    let mut b = relax_core::linalg::sparse::SparseBuilder::new(d.nrows());
    for i in 0..d.nrows() {
        for j in 0..d.ncols() {
            if d[(i, j)] != 0.0 {
                b.add(i, j, d[(i, j)]);
            }
        }
    }
    b.build()
}

fn quad(op: &SparseOperator, a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(op.matvec(b)).map(|(x, y)| x * y).sum()
}

#[test]
fn tjz_kernel_counts_fragments() {
    for l in 2..=6 {
        assert_eq!(kernel_dimension(&op(ModelId::TJz, l, None)).unwrap(), (1 << (l + 1)) - 1, "L={l}");
    }
}

#[test]
fn kernel_dimension_equals_krylov_count() {
    let flip = ImpuritySpec::new(ImpurityKind::Flip, &[2]);
    let swap = ImpuritySpec::new(ImpurityKind::Swap, &[1, 2]);
    let cases: Vec<(ModelId, usize, Option<ImpuritySpec>)> = vec![
        (ModelId::U1Half, 6, None),
        (ModelId::U1Half, 6, Some(flip.clone())),
        (ModelId::DipHalfW4W5, 8, None),
        (ModelId::DipHalfW4W5, 8, Some(swap)),
        (ModelId::DipOneH3, 5, None),
        (ModelId::DipOneH3, 5, Some(resample(&[5]))),
        (ModelId::DipOneH3H4, 5, None),
        (ModelId::TJz, 5, Some(resample(&[3]))),
    ];
    for (model, l, imp) in cases {
        let h = op(model, l, imp.as_ref());
        let gs = build_gate_set(model, l, imp.as_ref()).unwrap();
        let krylov = enumerate_krylov(&gs, CAP).unwrap().subspace_count;
        assert_eq!(kernel_dimension(&h).unwrap(), krylov, "{model} L={l} {imp:?}");
    }
}

#[test]
fn breaking_impurity_leaves_only_identity() {
    let cases = [
        (ModelId::U1Half, 6, ImpuritySpec::new(ImpurityKind::Flip, &[3])),
        (ModelId::TJz, 5, resample(&[5])),
        (ModelId::DipOneH3, 5, resample(&[4, 5])),
    ];
    for (model, l, imp) in cases {
        let h = op(model, l, Some(&imp));
        let dec = dense_eigen(&h.to_dense()).unwrap();
        assert!(dec.energies[1] > 1e-9, "{model}");
        let id = identity_state(h.dim());
        let ov: f64 = dec.orbitals[0].iter().zip(&id).map(|(a, b)| a * b).sum();
        assert!((ov.abs() - 1.0).abs() < 1e-10);
        assert!(h.matvec(&id).iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn operators_are_symmetric_and_errors_are_typed() {
    let h = op(ModelId::DipOneH3H4, 5, Some(&resample(&[4, 5])));
    assert!(h.is_symmetric(0.0));
    assert!(matches!(
        build_super_hamiltonian(ModelId::TJz, 10, None, 0.0, CAP),
        Err(relax_core::Error::SizeError { .. })
    ));
    assert!(matches!(
        build_super_hamiltonian(ModelId::TJz, 4, Some(&ImpuritySpec::new(ImpurityKind::Swap, &[1, 2])), 1.0, CAP),
        Err(relax_core::Error::UnsupportedImpurity { .. })
    ));
}

// Reference gaps from the dense composite-space oracle.
#[test]
fn tjz_boundary_impurity_gaps() {
    let want = [(3, 0.04574840818369857), (4, 0.01342040539337156), (5, 0.004259618526836634), (6, 0.0013982480603334053)];
    for (l, gap) in want {
        let got = super_gap(&op(ModelId::TJz, l, Some(&resample(&[l])))).unwrap();
        assert!((got - gap).abs() < 1e-9 * gap.max(1e-3), "L={l}: {got}");
        assert!(got <= 3.0 / (3f64.powi(l as i32) - 1.0));
    }
}

#[test]
fn h3_impurity_gaps() {
    let h3 = [(3, 0.1346765507788353), (4, 0.02580248120292532), (5, 0.00658880637958942), (6, 0.0019441148286288346), (7, 0.0006186213951977819)];
    for (l, gap) in h3 {
        let got = super_gap(&op(ModelId::DipOneH3, l, Some(&resample(&[l - 1, l])))).unwrap();
        assert!((got - gap).abs() < 1e-9, "H3 L={l}: {got}");
    }
    let h3h4 = [(4, 0.0487137819783954), (5, 0.019262388317645936), (6, 0.009522767628847082), (7, 0.005179560063723511)];
    for (l, gap) in h3h4 {
        let got = super_gap(&op(ModelId::DipOneH3H4, l, Some(&resample(&[l - 1, l])))).unwrap();
        assert!((got - gap).abs() < 1e-9, "H3+H4 L={l}: {got}");
    }
}

#[test]
fn two_impurity_exact_gaps() {
    for (l, gap) in [(4, 0.22520083999517582), (5, 0.12785035989013407)] {
        let got = super_gap(&op(ModelId::TJz, l, Some(&resample(&[1, l])))).unwrap();
        assert!((got - gap).abs() < 1e-9, "L={l}: {got}");
        assert!(got <= two_impurity_effective(l, TwoImpurityModel::FullEff).unwrap().gap);
    }
}

#[test]
fn projected_impurity_reproduces_hk() {
    for l in 3..=5 {
        let v = impurity_part(ModelId::TJz, l, &resample(&[l]));
        let p0 = op(ModelId::TJz, l, None);
        for k in 1..=l {
            let hk = build_effective_hk(l, k).unwrap();
            let basis: Vec<Vec<f64>> = (k..=l).map(|m| tjz_kl_vector(l, k, m).unwrap()).collect();
            for (a, va) in basis.iter().enumerate() {
                assert!(p0.matvec(va).iter().all(|x| x.abs() < 1e-12));
                for (b, vb) in basis.iter().enumerate() {
                    let want = if a == b {
                        hk.diag[a]
                    } else if a.abs_diff(b) == 1 {
                        hk.off[a.min(b)]
                    } else {
                        0.0
                    };
                    assert!((quad(&v, va, vb) - want).abs() < 1e-12, "L={l} k={k} ({a},{b})");
                }
            }
        }
    }
}

#[test]
fn full_eff_matches_projection_on_kl_basis() {
    let l = 4;
    let v = impurity_part(ModelId::TJz, l, &resample(&[1, l]));
    let res = two_impurity_effective(l, TwoImpurityModel::FullEff).unwrap();
    let TwoImpurityOperator::Sparse(h) = res.operator else { panic!("expected sparse operator") };
    let basis: Vec<Vec<f64>> = (1..=l).flat_map(|k| (k..=l).map(move |m| (k, m))).map(|(k, m)| tjz_kl_vector(l, k, m).unwrap()).collect();
    assert_eq!(basis.len(), h.dim());
    for (a, va) in basis.iter().enumerate() {
        for (b, vb) in basis.iter().enumerate() {
            assert!((quad(&v, va, vb) - h.get(a, b)).abs() < 1e-12, "({a},{b})");
        }
    }
}

#[test]
fn sliom_hopping_matches_explicit_sliom_elements() {
    let l = 5;
    let v = impurity_part(ModelId::TJz, l, &resample(&[1, l]));
    let res = two_impurity_effective(l, TwoImpurityModel::SliomHopping).unwrap();
    let TwoImpurityOperator::Tridiagonal(h) = res.operator else { panic!("expected tridiagonal operator") };
    let qs: Vec<Vec<f64>> = (1..=l)
        .map(|k| {
            let q = tjz_qk_vector(l, k).unwrap();
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            q.iter().map(|x| x / n).collect()
        })
        .collect();
    for k in 0..l {
        assert!((quad(&v, &qs[k], &qs[k]) - h.diag[k]).abs() < 1e-12);
        if k + 1 < l {
            assert!((quad(&v, &qs[k], &qs[k + 1]) - h.off[k]).abs() < 1e-12);
        }
    }
}

#[test]
fn sliom_hopping_bulk_elements() {
    let res = two_impurity_effective(600, TwoImpurityModel::SliomHopping).unwrap();
    let TwoImpurityOperator::Tridiagonal(h) = res.operator else { panic!("expected tridiagonal operator") };
    assert!((h.diag[0] - 4.0 / 3.0).abs() < 1e-2);
    for k in [10, 100, 300] {
        assert!((h.diag[k] - 2.0 / 3.0).abs() < 1e-2, "k={k}: {}", h.diag[k]);
        assert!((h.off[k] + 1.0 / 3.0).abs() < 1e-2, "k={k}: {}", h.off[k]);
    }
}

#[test]
fn graph_laplacian_matches_projected_impurity() {
    for l in 3..=6 {
        let g = graph_laplacian_tjz(l).unwrap();
        let proj = pattern_projected_impurity(l).unwrap();
        let diff = (g.operator.to_dense() - proj).abs().max();
        assert!(diff < 1e-12, "L={l}: {diff}");
    }
    let gaps = [(3, 0.07307453119852836), (4, 0.024436052838929648), (5, 0.008521753817603835)];
    for (l, want) in gaps {
        let g = graph_laplacian_tjz(l).unwrap();
        let gap = g.gap().unwrap();
        assert!((gap - want).abs() < 1e-10);
        assert!((gap - hk_ground_energy(l, 1).unwrap()).abs() < 1e-8 * gap);
        let three = 3f64.powi(l as i32);
        assert_eq!(g.cut_boundary, 1.0);
        assert_eq!(g.cut_volume, (three - 1.0) / 2.0);
        assert!((g.cheeger_bound - 4.0 / (three - 1.0)).abs() < 1e-15);
        assert!(g.cheeger_lower() <= gap && gap <= g.cheeger_bound);
    }
}

#[test]
fn tjz_variational_energies() {
    assert_eq!(sliom_variational_energy(4, SliomProbe::TJz { k: 1, j_s: 4 }, 1.0).unwrap(), 3.0 / 80.0);
    for l in 2..=14 {
        for j_s in 1..=l {
            let got = sliom_variational_energy(l, SliomProbe::TJz { k: 1, j_s }, 0.7).unwrap();
            let want = 0.7 * (4.0 * 3f64.powi((l - j_s) as i32) - 1.0) / (3f64.powi(l as i32) - 1.0);
            assert!((got - want).abs() < 1e-14 * want, "L={l} j_s={j_s}");
        }
    }
    let l = 5;
    for j_s in 1..=l {
        let v = impurity_part(ModelId::TJz, l, &resample(&[j_s]));
        for k in 1..=l {
            let q = tjz_qk_vector(l, k).unwrap();
            let explicit = quad(&v, &q, &q) / q.iter().map(|x| x * x).sum::<f64>();
            let closed = sliom_variational_energy(l, SliomProbe::TJz { k, j_s }, 1.0).unwrap();
            assert!((explicit - closed).abs() < 1e-12, "k={k} j_s={j_s}: {explicit} vs {closed}");
        }
    }
}

#[test]
fn tjz_variational_asymptotic_form() {
    let l = 200;
    for k in [20, 60, 100] {
        let exact = sliom_variational_energy(l, SliomProbe::TJz { k, j_s: l }, 1.0).unwrap();
        let approx = tjz_variational_asymptotic(l, k, 1.0);
        assert!((approx / exact - 1.0).abs() < 0.1, "k={k}: {approx} vs {exact}");
    }
}

#[test]
fn h3_variational_energies() {
    for l in 4..=7 {
        let v = impurity_part(ModelId::DipOneH3, l, &resample(&[l - 1, l]));
        let p0 = op(ModelId::DipOneH3, l, None);
        let s = h3_left_vector(l).unwrap();
        assert!(p0.matvec(&s).iter().all(|x| x.abs() < 1e-12));
        let e = quad(&v, &s, &s) / s.iter().map(|x| x * x).sum::<f64>();
        let closed = sliom_variational_energy(l, SliomProbe::H3Left, 1.0).unwrap();
        assert!((e - closed).abs() < 1e-12 && (closed - 14.0 / (3f64.powi(l as i32) - 1.0)).abs() < 1e-15);
        for j0 in 1..=l - 3 {
            let b = h3_blockade_vector(l, j0).unwrap();
            assert!(p0.matvec(&b).iter().all(|x| x.abs() < 1e-12));
            let e = quad(&v, &b, &b) / b.iter().map(|x| x * x).sum::<f64>();
            assert!((e - blockade_energy_exact(l, j0, 1.0).unwrap()).abs() < 1e-12, "L={l} j0={j0}");
            assert!(e <= sliom_variational_energy(l, SliomProbe::H3Blockade { j0 }, 1.0).unwrap());
        }
    }
    let quoted = sliom_variational_energy(12, SliomProbe::H3Blockade { j0: 5 }, 1.0).unwrap();
    assert!((quoted - 8.0 / 728.0).abs() < 1e-16);
    assert_eq!(sliom_decay_bound(12, SliomProbe::H3Blockade { j0: 5 }, 1.0).unwrap(), quoted);
    assert!(sliom_variational_energy(5, SliomProbe::H3Blockade { j0: 3 }, 1.0).is_err());
}

#[test]
fn sliom_states_are_zero_modes() {
    let l = 5;
    let p0 = op(ModelId::TJz, l, None);
    for k in 1..=l {
        let s = SliomState::tjz(l, k).unwrap();
        let v = s.embedded().unwrap();
        let q = tjz_qk_vector(l, k).unwrap();
        assert!(v.iter().zip(&q).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(p0.matvec(&v).iter().all(|x| x.abs() < 1e-10));
    }
    let b = SliomState::h3_blockade(6, 2).unwrap();
    assert_eq!(b.coefficients.len(), 729);
}

#[test]
fn effective_hk_small_case() {
    let h = build_effective_hk(2, 1).unwrap();
    assert_eq!(h.diag, vec![1.25, 0.5]);
    assert!((h.off[0] + 0.5).abs() < 1e-15);
    let ev = h.eigenvalues().unwrap();
    assert!((ev[0] - 0.25).abs() < 1e-14 && (ev[1] - 1.5).abs() < 1e-14);
    assert!(build_effective_hk(3, 0).is_err());
}

#[test]
fn accurate_ground_energy() {
    for l in [4, 6, 8] {
        for k in 1..=l {
            let ev = build_effective_hk(l, k).unwrap().eigenvalues().unwrap();
            let acc = hk_ground_energy(l, k).unwrap();
            assert!((acc - ev[0]).abs() < 1e-13, "L={l} k={k}");
        }
    }
    for l in [40, 80] {
        let lam = hk_ground_energy(l, 1).unwrap();
        let var = sliom_variational_energy(l, SliomProbe::TJz { k: 1, j_s: l }, 1.0).unwrap();
        assert!(lam < var && lam > 0.9 * var, "L={l}: {lam} vs {var}");
    }
}

#[test]
fn effective_correlation_start_and_plateau() {
    let s = effective_correlation_tjz(15, 1, &[0.0]).unwrap();
    assert!((s.values[0] - 62.0 / 135.0).abs() < 1e-12);
    let spec = EffectiveSpectrum::new(20, 1).unwrap();
    let (_, w) = spec.lowest_of(1).unwrap();
    let plateau = 4.0 / (9.0 * (1.0 - 3f64.powi(-20)));
    assert!((w - plateau).abs() < 1e-6);
    assert!((spec.value_at(2e4) - plateau).abs() < 1e-4);
    for l in [6, 11, 30] {
        let s = effective_correlation_tjz(l, 1, &[0.0]).unwrap();
        let want = 2.0 * (2.0 * l as f64 + 1.0) / (9.0 * l as f64);
        assert!((s.values[0] - want).abs() < 1e-12);
    }
    let bulk = EffectiveSpectrum::new(20, 9).unwrap();
    assert!(bulk.value_at(0.0) < 2.0 / 3.0);
}

#[test]
fn effective_overlaps_match_explicit_vectors() {
    let l = 5;
    for j in 1..=l {
        let sz: Vec<f64> = (0..3usize.pow(l as u32))
            .map(|idx| [0.0, 1.0, -1.0][relax_core::automaton::decode(idx, 3, l)[j - 1] as usize])
            .collect();
        let mut total = 0.0;
        for k in 1..=l {
            for m in k..=l {
                let v = tjz_kl_vector(l, k, m).unwrap();
                let o: f64 = v.iter().zip(&sz).map(|(a, b)| a * b).sum();
                total += o * o;
            }
        }
        let spec = EffectiveSpectrum::new(l, j).unwrap();
        assert!((spec.value_at(0.0) - total / 243.0).abs() < 1e-12, "j={j}");
    }
}

#[test]
fn parent_spectrum() {
    let p = parent_h0(4).unwrap();
    let ev = p.operator.eigenvalues().unwrap();
    for (a, b) in ev.iter().zip([0.0, 0.375, 0.75, 1.125, 1.5]) {
        assert!((a - b).abs() < 1e-12);
    }
    let l = 9;
    let p = parent_h0(l).unwrap();
    let dec = p.operator.eigen().unwrap();
    let q: Vec<f64> = (0..=l).map(|m| (2f64.powi(m as i32) * binomial(l, m)).sqrt()).collect();
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let ov: f64 = dec.orbitals[0].iter().zip(&q).map(|(a, b)| a * b / n).sum();
    assert!((ov.abs() - 1.0).abs() < 1e-12);
    assert!(dec.energies.windows(2).all(|w| (w[1] - w[0] - 1.5 / l as f64).abs() < 1e-12));
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn naive_splitting_is_uniform() {
    let e = naive_u1_splitting(10, 1.0).unwrap();
    assert_eq!(e[0], 0.0);
    assert!((e[1] - 0.4).abs() < 1e-15);
    let h = relax_core::hydro::build_u1(1000, relax_core::hydro::Boundary::Open, Some(relax_core::hydro::SiteImpurity { site: 1, g: 1.0 })).unwrap();
    let gap = h.lowest(1).unwrap().energies[0];
    assert!(gap < 0.01 * naive_u1_splitting(1000, 1.0).unwrap()[1]);
}

#[test]
fn spectrum_table() {
    assert_eq!(spectrum_csv(&[0.0, 0.5]).lines().next(), Some("index,energy"));
    assert_eq!(spectrum_csv(&[0.0, 0.5]).lines().count(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gap_below_every_trial_energy(l in 3usize..6, j_s in 1usize..6, g in 0.2f64..3.0) {
        let j_s = j_s.min(l);
        let h = build_super_hamiltonian(ModelId::TJz, l, Some(&resample(&[j_s])), g, CAP).unwrap();
        let gap = super_gap(&h).unwrap();
        for k in 1..=l {
            let var = sliom_variational_energy(l, SliomProbe::TJz { k, j_s }, g).unwrap();
            prop_assert!(gap <= var * (1.0 + 1e-9));
        }
    }

    #[test]
    fn super_hamiltonians_are_psd(l in 3usize..6, g in 0.0f64..4.0, which in 0usize..3) {
        let (model, imp) = match which {
            0 => (ModelId::TJz, resample(&[1])),
            1 => (ModelId::DipOneH3, resample(&[l - 1, l])),
            _ => (ModelId::U1Half, ImpuritySpec::new(ImpurityKind::Flip, &[l])),
        };
        let h = build_super_hamiltonian(model, l, Some(&imp), g, CAP).unwrap();
        let ev = dense_eigen(&h.to_dense()).unwrap().energies;
        prop_assert!(ev[0] >= -1e-10 * h.norm_bound());
    }
}
