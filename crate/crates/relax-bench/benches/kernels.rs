use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use relax_bench::{dipole_hydro, tjz_super, u1_gate_set, u1_hydro};
use relax_core::automaton::{estimate_autocorrelation, SamplerOptions};
use relax_core::hydro::spectral_correlation;
use relax_core::series::log_grid;
use relax_core::special::erfcx;
use relax_core::superham::{effective_correlation_tjz, super_gap};

fn sampler(c: &mut Criterion) {
    let gs = u1_gate_set(64);
    let times: Vec<u64> = (0..=100).step_by(10).collect();
    c.bench_function("sampler u1 L=64 4096x100", |b| {
        b.iter(|| estimate_autocorrelation(&gs, &[1, 32], &times, 4096, 1, SamplerOptions::default()).unwrap())
    });
}

fn banded(c: &mut Criterion) {
    let mut g = c.benchmark_group("banded eigenvalues");
    g.sample_size(10);
    for l in [250usize, 1000] {
        let u1 = u1_hydro(l);
        g.bench_with_input(BenchmarkId::new("u1", l), &u1, |b, h| b.iter(|| h.eigenvalues().unwrap()));
        let dip = dipole_hydro(l);
        g.bench_with_input(BenchmarkId::new("dipole", l), &dip, |b, h| b.iter(|| h.eigenvalues().unwrap()));
    }
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let h = u1_hydro(1000);
    let times = log_grid(1.0, 2e3, 20);
    c.bench_function("spectral correlation u1 L=1000", |b| {
        b.iter(|| spectral_correlation(&h, &[(4, 4), (16, 16)], &times).unwrap())
    });
}

fn lanczos(c: &mut Criterion) {
    let mut g = c.benchmark_group("super gap t-Jz");
    g.sample_size(10);
    for l in [6usize, 8] {
        let op = tjz_super(l);
        g.bench_with_input(BenchmarkId::from_parameter(l), &op, |b, op| b.iter(|| super_gap(op).unwrap()));
    }
    g.finish();
}

fn effective(c: &mut Criterion) {
    let times = log_grid(1e-2, 1e12, 10);
    c.bench_function("effective correlation t-Jz L=100", |b| {
        b.iter(|| effective_correlation_tjz(100, 10, &times).unwrap())
    });
}

fn special(c: &mut Criterion) {
    let xs: Vec<f64> = (0..1000).map(|i| -5.0 + 0.05 * i as f64).collect();
    c.bench_function("erfcx x1000", |b| b.iter(|| xs.iter().map(|&x| erfcx(black_box(x))).sum::<f64>()));
}

criterion_group!(benches, sampler, banded, spectral, lanczos, effective, special);
criterion_main!(benches);
