use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sdoflab_core::subspace::{intersect, nullspace, orthonormal_basis};
use sdoflab_core::{
    allocate_jamming, build_precoders, diagnose, sample_channels, sum_sdof, sweep, AntennaConfig,
    ChannelDistribution, EveMode, Lane, RngStream, SweepConfig, Tolerance,
};

fn theory(c: &mut Criterion) {
    let grid: Vec<AntennaConfig> = sdoflab_core::verify::config_grid(8);
    c.bench_function("sum_sdof/grid8", |b| {
        b.iter(|| {
            grid.iter()
                .map(|c| sum_sdof(black_box(c)).numerator())
                .sum::<i64>()
        })
    });
    c.bench_function("allocate_jamming/grid8", |b| {
        b.iter(|| {
            grid.iter()
                .map(|c| allocate_jamming(black_box(c)).total_jamming().numerator())
                .sum::<i64>()
        })
    });
}

fn subspace(c: &mut Criterion) {
    let dist = ChannelDistribution::default();
    let mut rng = RngStream::new(1, 0, 0).rng(Lane::Precoder);
    let h = dist.sample_matrix(4, 6, &mut rng);
    let a = dist.sample_matrix(6, 4, &mut rng);
    let b = dist.sample_matrix(6, 4, &mut rng);
    let tol = Tolerance::default();
    c.bench_function("nullspace/4x6", |bch| {
        bch.iter(|| nullspace(black_box(&h), tol).unwrap())
    });
    let (sa, sb) = (
        orthonormal_basis(&a, tol).unwrap(),
        orthonormal_basis(&b, tol).unwrap(),
    );
    c.bench_function("intersect/6:4+4", |bch| {
        bch.iter(|| intersect(black_box(&sa), black_box(&sb), tol).unwrap())
    });
}

fn precoders(c: &mut Criterion) {
    let tol = Tolerance::default();
    for (m1, m2, n, n_e) in [(2, 2, 3, 2), (3, 3, 2, 3), (5, 4, 4, 3)] {
        let cfg = AntennaConfig::new(m1, m2, n, n_e).unwrap();
        let alloc = allocate_jamming(&cfg);
        let stream = RngStream::new(3, 0, 0);
        let ch = sample_channels(&cfg, stream, EveMode::StaticEve, &ChannelDistribution::default());
        c.bench_function(&format!("build_precoders/{cfg}"), |b| {
            b.iter(|| {
                let pre = build_precoders(&cfg, &ch, &alloc, &mut stream.rng(Lane::Precoder), tol).unwrap();
                diagnose(&ch, &pre, tol).unwrap()
            })
        });
    }
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = SweepConfig::new(
        AntennaConfig::new(2, 2, 3, 1).unwrap(),
        vec![60.0, 70.0, 80.0, 90.0, 100.0],
        30,
        0,
    );
    let mut g = c.benchmark_group("sweep");
    g.sample_size(20);
    g.bench_function("(2,2,3,1)/30 trials", |b| {
        b.iter(|| sweep(black_box(&cfg)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, theory, subspace, precoders, monte_carlo);
criterion_main!(benches);
