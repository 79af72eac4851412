use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;
use quperf_core::search::{run_search, SearchConfig, SearchMode};
use quperf_core::RingId;

fn config(d: i64, n: u32, max_norm: u64, mode: SearchMode) -> SearchConfig {
    let t = BigRational::from_integer(BigInt::from(2));
    SearchConfig::new(RingId::new(d).unwrap(), n, t, max_norm, mode).unwrap()
}

fn bench_modes(c: &mut Criterion) {
    let mut g = c.benchmark_group("search d=-1 t=2");
    g.sample_size(10);
    for (mode, name) in [(SearchMode::Elements, "elements"), (SearchMode::Signatures, "signatures")] {
        for n in [1, 2] {
            let cfg = config(-1, n, 100_000, mode);
            g.bench_with_input(BenchmarkId::new(name, n), &cfg, |b, cfg| b.iter(|| run_search(black_box(cfg)).unwrap()));
        }
    }
    g.finish();
}

fn bench_signatures_large(c: &mut Criterion) {
    let mut g = c.benchmark_group("signatures 10^7");
    g.sample_size(10);
    for d in [-1, -3, -163] {
        let cfg = config(d, 2, 10_000_000, SearchMode::Signatures);
        g.bench_with_input(BenchmarkId::from_parameter(d), &cfg, |b, cfg| b.iter(|| run_search(black_box(cfg)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_modes, bench_signatures_large);
criterion_main!(benches);
