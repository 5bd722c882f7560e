use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qspectral_bench::{blob_points, hermitian, problem};
use qspectral_core::classical::{kmeans, KmeansInit};
use qspectral_core::numerics::hermitian_eig;
use qspectral_core::qpea::{amplify, bpea_run, AmplifyOptions};
use qspectral_core::readout::{amplified_similarity, RankingOptions};
use qspectral_core::PeaConfig;

fn eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for n in [16, 64, 256] {
        let h = hermitian(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| b.iter(|| hermitian_eig(black_box(h), 1e-10).unwrap()));
    }
    group.finish();
}

fn phase_estimation(c: &mut Criterion) {
    let mut group = c.benchmark_group("bpea_run");
    for (n, m) in [(16, 6), (64, 6), (16, 10)] {
        let p = problem(n, m, 2);
        for cfg in [PeaConfig::qft(m), PeaConfig::biased(m, 20.0)] {
            let id = BenchmarkId::new(cfg.mode.label(), format!("n{n}_m{m}"));
            group.bench_with_input(id, &cfg, |b, cfg| b.iter(|| bpea_run(cfg, &p.u, black_box(&p.y)).unwrap()));
        }
    }
    group.finish();
}

fn amplification(c: &mut Criterion) {
    let mut group = c.benchmark_group("amplify_30");
    group.sample_size(20);
    for n in [16, 64] {
        let p = problem(n, 6, 3);
        let opts = AmplifyOptions::fixed(30);
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| amplify(&PeaConfig::qft(6), &p.u, black_box(&p.y), &opts).unwrap())
        });
    }
    group.finish();
}

fn readout(c: &mut Criterion) {
    let p = problem(16, 6, 4);
    let opts = RankingOptions::default();
    c.bench_function("amplified_similarity_16", |b| b.iter(|| amplified_similarity(&p.u, black_box(&p.y), &opts).unwrap()));
}

fn clustering(c: &mut Criterion) {
    let mut group = c.benchmark_group("kmeans");
    for per in [25, 250] {
        let ps = blob_points(per, 5);
        group.bench_with_input(BenchmarkId::from_parameter(4 * per), &ps, |b, ps| {
            b.iter(|| kmeans(black_box(ps), 4, KmeansInit::FarthestPoint { seed: 0 }, 300).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eig, phase_estimation, amplification, readout, clustering);
criterion_main!(benches);
