use std::f64::consts::PI;

use proptest::prelude::*;
use relax_core::continuum::*;
use relax_core::quad::integrate;
use relax_core::special::gamma;
use relax_core::Error;

fn params(d: f64, g: f64, x: f64, x0: f64, t: f64) -> ContinuumParams {
    ContinuumParams::new(d, g, x, x0, t)
}

#[test]
fn sink_without_impurity_is_gaussian() {
    for &(x, x0, t) in &[(0.3, -1.2, 0.7), (4.0, 1.0, 10.0), (0.0, 0.0, 2.5)] {
        let c = diffusion_with_sink(&params(1.7, 0.0, x, x0, t)).unwrap();
        let g = (-(x - x0) * (x - x0) / (4.0 * 1.7 * t)).exp() / (4.0 * PI * 1.7 * t).sqrt();
        assert!((c - g).abs() < 1e-15);
    }
}

#[test]
fn strong_sink_absorbs() {
    for g in [1e6, 1e9, f64::INFINITY] {
        let c = diffusion_with_sink(&params(1.0, g, 0.0, 1.5, 2.0)).unwrap();
        assert!(c < 1e-5, "g={g} gives {c}");
    }
}

#[test]
fn initial_condition_errors() {
    assert!(matches!(diffusion_with_sink(&params(1.0, 1.0, 1.0, 1.0, 0.0)), Err(Error::DomainError(_))));
    assert_eq!(diffusion_with_sink(&params(1.0, 1.0, 2.0, 1.0, 0.0)).unwrap(), 0.0);
    assert!(matches!(diffusion_boundary_impurity(&params(1.0, 1.0, -1.0, 1.0, 1.0)), Err(Error::DomainError(_))));
}

fn one_sided_slopes(f: &dyn Fn(f64) -> f64, at: f64, h: f64) -> (f64, f64) {
    let right = (-3.0 * f(at) + 4.0 * f(at + h) - f(at + 2.0 * h)) / (2.0 * h);
    let left = (3.0 * f(at) - 4.0 * f(at - h) + f(at - 2.0 * h)) / (2.0 * h);
    (left, right)
}

#[test]
fn sink_flux_matching() {
    for &(d, g, x0, xs, t) in &[(1.0, 0.5, 1.0, 0.0, 3.0), (2.0, 3.0, -0.7, 0.4, 0.8), (8.0, 4.0, 5.0, 1.0, 20.0)] {
        let c = |x: f64| diffusion_with_sink(&ContinuumParams { d, g, x, x0, xs, t }).unwrap();
        let (l, r) = one_sided_slopes(&c, xs, 1e-4);
        let jump = d * (r - l);
        let target = g * c(xs);
        assert!((jump - target).abs() <= 1e-4 * target.abs(), "jump {jump} vs g C {target}");
        assert!((c(xs + 1e-9) - c(xs - 1e-9)).abs() < 1e-8);
    }
}

#[test]
fn free_normalisation() {
    for t in [0.01f64, 1.0, 50.0] {
        let w = 30.0 * t.sqrt();
        let total = integrate(&|x| diffusion_with_sink(&params(1.0, 0.0, x, 0.3, t)).unwrap(), 0.3 - w, 0.3 + w, 16, 1e-12).unwrap();
        assert!((total - 1.0).abs() < 1e-6);
    }
}

#[test]
fn boundary_limits() {
    let (d, x, x0, t) = (1.3, 0.8, 1.9, 2.2);
    let free = diffusion_boundary_impurity(&params(d, 0.0, x, x0, t)).unwrap();
    let cosh = (-(x * x + x0 * x0) / (4.0 * d * t)).exp() * (x * x0 / (2.0 * d * t)).cosh() / (PI * d * t).sqrt();
    assert!((free - cosh).abs() < 1e-14);
    let sinh = (-(x * x + x0 * x0) / (4.0 * d * t)).exp() * (x * x0 / (2.0 * d * t)).sinh() / (PI * d * t).sqrt();
    let strong = diffusion_boundary_impurity(&params(d, 1e9, x, x0, t)).unwrap();
    assert!((strong - sinh).abs() < 1e-8);
    let inf = diffusion_boundary_impurity(&params(d, f64::INFINITY, x, x0, t)).unwrap();
    assert!((inf - sinh).abs() < 1e-14);
}

#[test]
fn boundary_robin_condition() {
    let (d, g, x0, t) = (2.0, 0.7, 1.2, 1.5);
    let c = |x: f64| diffusion_boundary_impurity(&params(d, g, x, x0, t)).unwrap();
    let (eps, h) = (1e-12, 1e-4);
    let slope = (-3.0 * c(eps) + 4.0 * c(h) - c(2.0 * h)) / (2.0 * h);
    let at0 = c(eps);
    assert!((d * slope - g * at0).abs() < 1e-5 * g * at0);
}

#[test]
fn remaining_charge_behind_absorbing_wall() {
    let (d, x0) = (1.0f64, 0.5);
    for t in [100.0, 1000.0] {
        let w = x0 + 40.0 * (d * t).sqrt();
        let q = integrate(&|x| absorbing_half_line(x, x0, d, t), 0.0, w, 32, 1e-12).unwrap();
        assert!((q - boundary_remaining_charge(x0, d, t)).abs() < 1e-9);
        let approx = x0 / (PI * d * t).sqrt();
        assert!((q / approx - 1.0).abs() < 0.01);
        let robin = integrate(&|x| diffusion_boundary_impurity(&params(d, f64::INFINITY, x.max(1e-12), x0, t)).unwrap(), 0.0, w, 32, 1e-12).unwrap();
        assert!((robin - q).abs() < 1e-9);
    }
}

#[test]
fn quartic_kernel_values() {
    for t in [1.0f64, 37.0, 1e4] {
        let s = t.powf(0.25);
        let bulk = subdiffusion_kernel(&params(1.0, 0.0, 3.0, 3.0, t), Geometry::Infinite).unwrap();
        assert!((bulk - gamma(0.25) / (4.0 * PI * s)).abs() < 1e-8 / s);
    }
    let t: f64 = 1e8;
    let s = t.powf(0.25);
    let sym = subdiffusion_kernel(&params(1.0, 0.0, 0.0, 0.0, t), Geometry::SemiSymmetric).unwrap();
    assert!((sym - gamma(0.25) / (PI * s)).abs() < 1e-8 / s);
    let cp = subdiffusion_kernel(&params(1.0, 0.0, 0.0, 0.0, t), Geometry::SemiChargePreserving).unwrap();
    assert!((cp - gamma(0.25) / (2.0 * PI * s)).abs() < 1e-8 / s);
    let near = subdiffusion_kernel(&params(1.0, 0.0, 0.5, 1.0, t), Geometry::SemiSymmetric).unwrap();
    assert!((near * PI * s / gamma(0.25) - 1.0).abs() < 0.02);
    let fb = subdiffusion_kernel(&params(1.0, 0.0, 0.0, 0.0, t), Geometry::SemiFullyBreaking).unwrap();
    assert!(fb.abs() < 1e-12);
}

#[test]
fn quartic_kernel_conserves_charge() {
    let t = 16.0;
    let bulk = integrate(&|x| subdiffusion_kernel(&params(1.0, 0.0, x, 0.0, t), Geometry::Infinite).unwrap(), -60.0, 80.0, 160, 1e-11).unwrap();
    assert!((bulk - 1.0).abs() < 1e-8, "{bulk}");
    for geom in [Geometry::SemiSymmetric, Geometry::SemiChargePreserving] {
        let q = integrate(&|x| subdiffusion_kernel(&params(1.0, 0.0, x, 1.5, t), geom).unwrap(), 0.0, 80.0, 160, 1e-11).unwrap();
        assert!((q - 1.0).abs() < 1e-7, "{geom:?}: {q}");
    }
}

#[test]
fn mode_roots_match_reference() {
    let fam = biharmonic_modes(1000.0, BcKind::Symmetric, 3).unwrap();
    let r: Vec<f64> = fam.roots.iter().map(|k| k * 1000.0 / PI).collect();
    assert!((r[0] - 1.50562).abs() < 1e-5);
    assert!((r[1] - 2.49975).abs() < 1e-5);
    for kind in [BcKind::Symmetric, BcKind::ChargePreserving, BcKind::FullyBreaking] {
        let fam = biharmonic_modes(7.0, kind, 12).unwrap();
        assert!(fam.residuals.iter().all(|&r| r <= 1e-10));
        for (n, k) in fam.roots.iter().enumerate() {
            let u = k * 7.0;
            let asym = match kind {
                BcKind::Symmetric => (n as f64 + 1.5) * PI,
                BcKind::ChargePreserving => (n as f64 + 0.75) * PI,
                BcKind::FullyBreaking => (n as f64 + 0.5) * PI,
            };
            assert!((u - asym).abs() < 2.0 * (-u).exp() + 1e-9 || n == 0);
        }
    }
}

#[test]
fn modes_are_orthonormal() {
    let l = 10.0;
    for kind in [BcKind::Symmetric, BcKind::ChargePreserving, BcKind::FullyBreaking] {
        let fam = biharmonic_modes(l, kind, 6).unwrap();
        let mut funcs: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
        for z in 0..kind.zero_mode_count() {
            let f = fam.clone();
            funcs.push(Box::new(move |x| f.zero_modes(x)[z]));
        }
        for n in 0..fam.len() {
            let f = fam.clone();
            funcs.push(Box::new(move |x| f.eval(n, x)));
        }
        for a in 0..funcs.len() {
            for b in 0..=a {
                let ip = integrate(&|x| funcs[a](x) * funcs[b](x), 0.0, l, 40, 1e-13).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-6, "{kind:?} ({a},{b}) = {ip}");
            }
        }
    }
}

fn derivatives(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> [f64; 4] {
    let p: Vec<f64> = (-3..=3).map(|i| f(x + i as f64 * h)).collect();
    [
        p[3],
        (p[4] - p[2]) / (2.0 * h),
        (p[4] - 2.0 * p[3] + p[2]) / (h * h),
        (p[5] - 2.0 * p[4] + 2.0 * p[2] - p[1]) / (2.0 * h * h * h),
    ]
}

#[test]
fn modes_satisfy_boundary_conditions() {
    let l = 4.0;
    for kind in [BcKind::Symmetric, BcKind::ChargePreserving, BcKind::FullyBreaking] {
        let fam = biharmonic_modes(l, kind, 3).unwrap();
        for n in 0..3 {
            let f = |x: f64| fam.eval(n, x);
            let right = derivatives(&f, l, 1e-3);
            assert!(right[2].abs() < 1e-4 && right[3].abs() < 1e-3, "{kind:?} right {right:?}");
            let left = derivatives(&f, 0.0, 1e-3);
            let (a, b) = match kind {
                BcKind::Symmetric => (left[2], left[3]),
                BcKind::ChargePreserving => (left[1], left[3]),
                BcKind::FullyBreaking => (left[0], left[1]),
            };
            assert!(a.abs() < 1e-4 && b.abs() < 1e-3, "{kind:?} left {left:?}");
        }
    }
}

#[test]
fn kernels_match_mode_sums() {
    let (l, t) = (200.0, 625.0);
    let cases = [
        (BcKind::Symmetric, Geometry::SemiSymmetric),
        (BcKind::ChargePreserving, Geometry::SemiChargePreserving),
        (BcKind::FullyBreaking, Geometry::SemiFullyBreaking),
    ];
    for (kind, geom) in cases {
        let fam = biharmonic_modes(l, kind, 80).unwrap();
        for &(x, x0) in &[(3.0, 4.0), (0.5, 0.5), (10.0, 2.0)] {
            let sum = fam.spectral_sum(x, x0, 1.0, t);
            let k = subdiffusion_kernel(&params(1.0, 0.0, x, x0, t), geom).unwrap();
            assert!((sum - k).abs() < 1e-4, "{kind:?} x={x} x0={x0}: {sum} vs {k}");
        }
    }
}

#[test]
fn scaling_dimension() {
    assert_eq!(rg_dimension(1), (1, RgClass::Relevant));
    assert_eq!(rg_dimension(2), (0, RgClass::Marginal));
    assert_eq!(rg_dimension(3), (-1, RgClass::Irrelevant));
}

#[test]
fn catalogue_lookup() {
    let bulk = asymptotic_law(&RegimeSpec::new(Symmetry::U1, ImpurityClass::None, Regime::Bulk, Quantity::Autocorrelation)).unwrap();
    assert_eq!(bulk.exponent, -0.5);
    let p = params(2.0, 0.0, 0.0, 0.0, 3.0);
    assert!((bulk.predict(&p) - 1.0 / (4.0 * PI * 6.0).sqrt()).abs() < 1e-15);
    let fb = asymptotic_law(&RegimeSpec::new(Symmetry::Dipole, ImpurityClass::FullyBreaking, Regime::Late, Quantity::Correlation)).unwrap();
    assert_eq!(fb.exponent, -1.25);
    let p = params(1.0, 0.0, 2.0, 3.0, 1.0);
    assert!((fb.predict(&p) - gamma(1.25) * 36.0 / (4.0 * PI)).abs() < 1e-12);
    let leak = asymptotic_law(&RegimeSpec::new(Symmetry::Dipole, ImpurityClass::ChargePreserving, Regime::Late, Quantity::DipoleLeakRate)).unwrap();
    assert_eq!(leak.exponent, -0.75);
    let missing = asymptotic_law(&RegimeSpec::new(Symmetry::U1, ImpurityClass::FullyBreaking, Regime::Late, Quantity::Correlation));
    assert!(matches!(missing, Err(Error::UnknownRegime(_))));
}

#[test]
fn catalogue_converges_to_quadrature() {
    for law in catalogue() {
        let near = law.validate(10.0).unwrap();
        let far = law.validate(30.0).unwrap();
        assert!(far.relative_deviation < 0.05, "{:?}: {}", law.spec, far.relative_deviation);
        assert!(far.relative_deviation <= near.relative_deviation + 1e-6, "{:?}", law.spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sink_is_bounded_by_free_kernel(d in 0.1f64..10.0, g in 0.0f64..20.0, x in -5.0f64..5.0, x0 in -5.0f64..5.0, t in 0.01f64..100.0) {
        let c = diffusion_with_sink(&params(d, g, x, x0, t)).unwrap();
        let free = diffusion_with_sink(&params(d, 0.0, x, x0, t)).unwrap();
        prop_assert!(c >= 0.0 && c <= free * (1.0 + 1e-12));
    }

    #[test]
    fn boundary_sink_between_walls(d in 0.1f64..10.0, g in 0.0f64..20.0, x in 0.01f64..5.0, x0 in 0.01f64..5.0, t in 0.01f64..100.0) {
        let c = diffusion_boundary_impurity(&params(d, g, x, x0, t)).unwrap();
        let reflect = diffusion_boundary_impurity(&params(d, 0.0, x, x0, t)).unwrap();
        let absorb = absorbing_half_line(x, x0, d, t);
        prop_assert!(c <= reflect * (1.0 + 1e-12) && c >= absorb - 1e-12 * reflect);
    }
}
