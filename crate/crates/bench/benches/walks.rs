use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qwalk_core::*;

fn walks(c: &mut Criterion) {
    let sym = WalkConfig::symmetric();
    let mut group = c.benchmark_group("walks");
    for n in [50usize, 200] {
        group.bench_with_input(BenchmarkId::new("global_trajectory", n), &n, |b, &n| {
            b.iter(|| global_trajectory(black_box(&sym), n))
        });
    }
    group.bench_function("global_distribution/200", |b| {
        b.iter(|| global_distribution(black_box(&sym), 200))
    });
    group.bench_function("prompt_trajectory/200", |b| {
        b.iter(|| prompt_trajectory(black_box(&sym), 200))
    });
    for (m, iterations) in [(2usize, 20usize), (2, 50), (3, 20)] {
        group.bench_with_input(
            BenchmarkId::new("cp_walk", format!("m{m}x{iterations}")),
            &(m, iterations),
            |b, &(m, it)| b.iter(|| cp_walk(black_box(&sym), m, it).unwrap()),
        );
    }
    let dq = delayed_kernel(&sym).unwrap();
    group.bench_function("kernel_walk/100", |b| {
        b.iter(|| kernel_walk(black_box(&dq), 100, &SiteDistribution::delta(0)).unwrap())
    });
    group.finish();
}

fn algebra(c: &mut Criterion) {
    let sym = WalkConfig::symmetric();
    let v = build_step_operator(&sym);
    c.bench_function("coin_block_pow/100", |b| b.iter(|| black_box(&v).pow(100)));
    c.bench_function("pseudo_memory_reconstruct/12", |b| {
        b.iter(|| pseudo_memory_reconstruct(black_box(&sym), 12).unwrap())
    });
}

fn analysis(c: &mut Criterion) {
    let traj = global_trajectory(&WalkConfig::symmetric(), 201);
    c.bench_function("compare_majorization/200", |b| {
        b.iter(|| compare_majorization(black_box(&traj[200]), black_box(&traj[201])))
    });
    c.bench_function("entropy_series/200", |b| {
        b.iter(|| entropy_series(black_box(&traj[1..]), 1).unwrap())
    });
}

criterion_group!(benches, walks, algebra, analysis);
criterion_main!(benches);
