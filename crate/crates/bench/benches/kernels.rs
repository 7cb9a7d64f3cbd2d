use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_complex::Complex64;
use std::hint::black_box;
use zeno_bench::released_ground_state;
use zeno_core::analytic::{delta_psi, escape_probability, spectral_f, LeftMode};
use zeno_core::erf::complex_erf;
use zeno_core::manybody::{OverlapKind, OverlapMatrix};
use zeno_core::tdse::PropagatorCN;
use zeno_core::TrapConfig;

fn crank_nicolson(c: &mut Criterion) {
    let (psi, open) = released_ground_state(24001);
    let mut prop = PropagatorCN::new(&open, 1e-6).unwrap();
    let mut amps = psi.amplitudes().to_vec();
    c.bench_function("cn_step_24001", |b| b.iter(|| prop.step(black_box(&mut amps))));
}

fn erf(c: &mut Criterion) {
    let series = Complex64::new(1.3, -0.7);
    let fraction = Complex64::new(5.0, -4.0);
    c.bench_function("erf_series_branch", |b| b.iter(|| complex_erf(black_box(series))));
    c.bench_function("erf_fraction_branch", |b| b.iter(|| complex_erf(black_box(fraction))));
}

fn analytic(c: &mut Criterion) {
    let cfg = TrapConfig::hard_wall();
    let n = LeftMode::ground();
    c.bench_function("delta_psi_edge", |b| b.iter(|| delta_psi(black_box(1.01), 1e-3, n, &cfg)));
    c.bench_function("spectral_f", |b| b.iter(|| spectral_f(black_box(72.0), 1e-3, &cfg)));
    c.bench_function("escape_probability", |b| b.iter(|| escape_probability(black_box(1e-3), n, &cfg)));
}

fn determinant(c: &mut Criterion) {
    let n = 8;
    let entries: Vec<Complex64> =
        (0..n * n).map(|i| Complex64::new(((i * 7 % 11) as f64).sin(), ((i * 3 % 5) as f64).cos())).collect();
    c.bench_function("overlap_det_8", |b| {
        b.iter_batched(
            || OverlapMatrix::from_entries(n, entries.clone(), OverlapKind::Plain).unwrap(),
            |m| m.determinant(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, crank_nicolson, erf, analytic, determinant);
criterion_main!(benches);
