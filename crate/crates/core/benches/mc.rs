use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rabi_pi::montecarlo::{run_mc_with, Execution, McConfig};
use rabi_pi::{estimate_pi, sample_dataset, EstimateConfig, NoiseModel, TimeGrid};

fn paper_models() -> Vec<NoiseModel> {
    vec![
        NoiseModel::new(0.9, 0.05, 0.0, 1.0).unwrap(),
        NoiseModel::new(0.85, 0.08, 0.03, 1.0).unwrap(),
        NoiseModel::new(0.92, 0.03, -0.02, 1.0).unwrap(),
    ]
}

fn bench_mc(c: &mut Criterion) {
    let models = paper_models();
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(20);
    for runs in [10usize, 50] {
        let cfg = McConfig {
            runs_per_model: runs,
            ..Default::default()
        };
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, 3 * runs), &cfg, |b, cfg| {
                b.iter(|| run_mc_with(black_box(&models), cfg, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_single(c: &mut Criterion) {
    let grid = TimeGrid::default();
    let ds = sample_dataset(&NoiseModel::ideal(), &grid, 8192, 1).unwrap();
    let cfg = EstimateConfig::default();
    c.bench_function("sample_dataset", |b| {
        b.iter(|| sample_dataset(&NoiseModel::ideal(), &grid, 8192, black_box(1)).unwrap())
    });
    c.bench_function("estimate_pi", |b| {
        b.iter(|| estimate_pi(black_box(&ds), &cfg).unwrap())
    });
}

criterion_group!(benches, bench_mc, bench_single);
criterion_main!(benches);
