use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relax_core::automaton::*;
use relax_core::series::integer_log_grid;
use relax_core::Error;

const CAP: u128 = DEFAULT_STATE_CAP;

fn imp(kind: ImpurityKind, sites: &[usize]) -> ImpuritySpec {
    ImpuritySpec::new(kind, sites)
}

/// Every model with one representative impurity (or none).
fn model_cases(l: usize) -> Vec<(ModelId, Option<ImpuritySpec>)> {
    vec![
        (ModelId::U1Half, None),
        (ModelId::U1Half, Some(imp(ImpurityKind::Flip, &[1]))),
        (ModelId::DipHalfW4W5, None),
        (ModelId::DipHalfW4W5, Some(imp(ImpurityKind::Swap, &[1, 2]))),
        (ModelId::DipHalfW4W5, Some(imp(ImpurityKind::Flip, &[1, 2, 3]))),
        (ModelId::DipOneH3, None),
        (ModelId::DipOneH3, Some(imp(ImpurityKind::Resample, &[l - 1, l]))),
        (ModelId::DipOneH3H4, Some(imp(ImpurityKind::Resample, &[l - 1, l]))),
        (ModelId::TJz, None),
        (ModelId::TJz, Some(imp(ImpurityKind::Resample, &[l]))),
    ]
}

#[test]
fn u1_pair_flips_half_the_time() {
    let gs = build_gate_set(ModelId::U1Half, 2, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut moved = 0;
    for _ in 0..20_000 {
        let mut c = vec![0u8, 1];
        gs.step(&mut c, &mut rng);
        if c == [1, 0] {
            moved += 1;
        } else {
            assert_eq!(c, [0, 1]);
        }
        let mut frozen = vec![0u8, 0];
        gs.step(&mut frozen, &mut rng);
        assert_eq!(frozen, [0, 0]);
    }
    assert!((moved as f64 / 20_000.0 - 0.5).abs() < 0.015);
}

#[test]
fn resample_impurity_is_uniform() {
    let gs = build_gate_set(ModelId::TJz, 2, Some(&imp(ImpurityKind::Resample, &[2]))).unwrap();
    let p = transition_matrix(&gs, CAP).unwrap();
    // config (hole, up) = index 1; impurity layer weight 1/2 spreads it evenly
    let from = encode_config(&[0, 1], 3);
    for v in 0..3u8 {
        let to = encode_config(&[0, v], 3);
        let bulk = if v == 1 { 0.5 * 0.5 } else { 0.0 };
        assert!((p.get(from, to) - (0.5 / 3.0 + bulk)).abs() < 1e-15);
    }
}

#[test]
fn equal_time_values_are_exact() {
    for (model, want) in [(ModelId::U1Half, 1.0), (ModelId::TJz, 2.0 / 3.0), (ModelId::DipOneH3, 2.0 / 3.0)] {
        let gs = build_gate_set(model, 4, None).unwrap();
        let orc = markov_oracle(&gs, &[1, 2], &[0], CAP).unwrap();
        assert!(orc.iter().all(|s| (s.values[0] - want).abs() < 1e-15));
        if model == ModelId::U1Half {
            let est = estimate_autocorrelation(&gs, &[2], &[0, 3], 1000, 1, SamplerOptions::default()).unwrap();
            assert_eq!(est[0].values[0], 1.0);
            assert_eq!(est[0].std_errors[0], 0.0);
        }
    }
}

#[test]
fn two_site_chain_equilibrates_in_one_step() {
    let gs = build_gate_set(ModelId::U1Half, 2, None).unwrap();
    let orc = markov_oracle(&gs, &[1], &[0, 1, 2, 7], CAP).unwrap();
    assert_eq!(orc[0].values[0], 1.0);
    for v in &orc[0].values[1..] {
        assert!((v - 0.5).abs() < 1e-15);
    }
    let est = estimate_autocorrelation(&gs, &[1], &[1, 5], 200_000, 9, SamplerOptions::default()).unwrap();
    for (v, e) in est[0].values.iter().zip(&est[0].std_errors) {
        assert!((v - 0.5).abs() < 4.0 * e);
    }
}

#[test]
fn column_sums_are_conserved() {
    let gs = build_gate_set(ModelId::U1Half, 6, None).unwrap();
    let sites: Vec<usize> = (1..=6).collect();
    for j0 in [1, 3] {
        let cols = markov_cross_correlation(&gs, j0, &sites, &[0, 1, 5, 40], CAP).unwrap();
        for t in 0..4 {
            let total: f64 = cols.iter().map(|s| s.values[t]).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn transition_matrices_are_symmetric() {
    for (model, spec) in model_cases(6) {
        let gs = build_gate_set(model, 6, spec.as_ref()).unwrap();
        let p = transition_matrix(&gs, CAP).unwrap();
        assert!(p.is_symmetric(1e-15), "{model} {spec:?}");
        let ones = vec![1.0; p.dim()];
        assert!(p.matvec(&ones).iter().all(|v| (v - 1.0).abs() < 1e-12));
    }
}

#[test]
fn krylov_counts() {
    let tjz = build_gate_set(ModelId::TJz, 3, None).unwrap();
    assert_eq!(enumerate_krylov(&tjz, CAP).unwrap().subspace_count, 15);
    let u1 = build_gate_set(ModelId::U1Half, 2, None).unwrap();
    let rep = enumerate_krylov(&u1, CAP).unwrap();
    assert_eq!(rep.subspace_count, 3);
    assert_eq!(rep.size_histogram.get(&1), Some(&2));
    let h3 = build_gate_set(ModelId::DipOneH3, 6, Some(&imp(ImpurityKind::Resample, &[5, 6]))).unwrap();
    assert_eq!(enumerate_krylov(&h3, CAP).unwrap().subspace_count, 1);
}

#[test]
fn impurities_never_increase_krylov_count() {
    for (model, spec) in model_cases(6) {
        let bare = build_gate_set(model, 6, None).unwrap();
        let with = build_gate_set(model, 6, spec.as_ref()).unwrap();
        let a = enumerate_krylov(&bare, CAP).unwrap().subspace_count;
        let b = enumerate_krylov(&with, CAP).unwrap().subspace_count;
        assert!(b <= a, "{model}: {b} > {a}");
    }
}

#[test]
fn size_and_budget_errors() {
    let gs = build_gate_set(ModelId::TJz, 13, None).unwrap();
    assert!(matches!(markov_oracle(&gs, &[1], &[0], CAP), Err(Error::SizeError { .. })));
    let opts = SamplerOptions { budget: 1000 };
    assert!(matches!(
        estimate_autocorrelation(&gs, &[1], &[0, 100], 10, 1, opts),
        Err(Error::BudgetError { .. })
    ));
}

#[test]
fn sampling_is_independent_of_thread_count() {
    let gs = build_gate_set(ModelId::DipOneH3, 6, Some(&imp(ImpurityKind::Resample, &[5, 6]))).unwrap();
    let times = integer_log_grid(50, 10);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| estimate_autocorrelation(&gs, &[1, 6], &times, 3 * CHUNK + 17, 42, SamplerOptions::default()))
            .unwrap()
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn magnetization_without_impurity_is_constant() {
    let gs = build_gate_set(ModelId::U1Half, 10, None).unwrap();
    let m = estimate_magnetization(&gs, &[1; 10], &[0, 10, 100], 500, 5, SamplerOptions::default()).unwrap();
    assert!(m.values.iter().all(|&v| v == 10.0));
    let gs = build_gate_set(ModelId::U1Half, 10, Some(&imp(ImpurityKind::Flip, &[1, 10]))).unwrap();
    let m = estimate_magnetization(&gs, &[1; 10], &[0, 2000], 2000, 5, SamplerOptions::default()).unwrap();
    assert!(m.values[1] < 2.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bulk_steps_conserve_charge_and_dipole(model_idx in 0usize..5, l in 5usize..12, seed in any::<u64>(), raw in proptest::collection::vec(0u8..3, 12)) {
        let model = ModelId::ALL[model_idx];
        let gs = build_gate_set(model, l, None).unwrap();
        let m = model.local_dim() as u8;
        let mut c: Vec<u8> = raw[..l].iter().map(|x| x % m).collect();
        let q = |c: &[u8]| c.iter().map(|&s| model.charge(s)).sum::<i64>();
        let sz = |c: &[u8]| c.iter().map(|&s| model.observable(s) as i64).sum::<i64>();
        let dip = |c: &[u8]| c.iter().enumerate().map(|(j, &s)| j as i64 * model.charge(s)).sum::<i64>();
        let (q0, s0, d0) = (q(&c), sz(&c), dip(&c));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            gs.step(&mut c, &mut rng);
            prop_assert_eq!(q(&c), q0);
            prop_assert_eq!(sz(&c), s0);
            if model.conserves_dipole() {
                prop_assert_eq!(dip(&c), d0);
            }
        }
    }

    #[test]
    fn states_stay_in_range(case in 0usize..10, seed in any::<u64>()) {
        let (model, spec) = model_cases(7).swap_remove(case);
        let gs = build_gate_set(model, 7, spec.as_ref()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = vec![0u8; 7];
        for _ in 0..100 {
            gs.step(&mut c, &mut rng);
            prop_assert!(c.iter().all(|&s| (s as usize) < model.local_dim()));
        }
    }
}
