use criterion::{criterion_group, criterion_main, Criterion};

use kicked_jc::classical::{ClassicalState, KickConvention};
use kicked_jc::sector::KickSign;
use kicked_jc::sweep::{
    sweep_classical_localization, sweep_classical_localization_serial,
    sweep_quantum_participation, sweep_quantum_participation_serial, SweepGrid,
};

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn quantum_grid(c: &mut Criterion) {
    let grid = SweepGrid::new(linspace(0.02, 2.0, 10), linspace(0.5, 4.0, 10), 1.0, 0.0).unwrap();
    let mut group = c.benchmark_group("quantum_participation_10x10_L3");

    group.bench_function("parallel", |b| {
        b.iter(|| sweep_quantum_participation(&grid, 3, KickSign::default()).unwrap())
    });
    group.bench_function("serial", |b| {
        b.iter(|| sweep_quantum_participation_serial(&grid, 3, KickSign::default()).unwrap())
    });
    group.finish();
}

fn classical_grid(c: &mut Criterion) {
    let grid = SweepGrid::new(linspace(0.02, 1.0, 8), linspace(0.5, 3.0, 8), 1.0, 0.0).unwrap();
    let init = ClassicalState::canonical();
    let mut group = c.benchmark_group("classical_localization_8x8_500kicks");
    group.sample_size(10);

    group.bench_function("parallel", |b| {
        b.iter(|| {
            sweep_classical_localization(&grid, &init, 500, None, KickConvention::Rotation)
                .unwrap()
        })
    });
    group.bench_function("serial", |b| {
        b.iter(|| {
            sweep_classical_localization_serial(&grid, &init, 500, None, KickConvention::Rotation)
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, quantum_grid, classical_grid);
criterion_main!(benches);
