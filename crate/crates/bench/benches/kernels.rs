use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hkw_core::colength::colength;
use hkw_core::exactla::{rank, rank_bitpacked, FieldCtx, FpMatrix};
use hkw_core::{IdealSpec, RingPresentation};

fn random_matrix(n: usize, p: u32, seed: u64) -> FpMatrix {
    let ctx = FieldCtx::prime(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n * n).map(|_| rng.random_range(0..p)).collect();
    FpMatrix::from_entries(n, n, entries, &ctx)
}

fn dense_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for &(p, n) in &[(7u32, 128usize), (7, 256), (13, 256), (65521, 256)] {
        let m = random_matrix(n, p, 1);
        g.bench_with_input(BenchmarkId::new(format!("F{p}"), n), &m, |b, m| {
            b.iter(|| rank(black_box(m)))
        });
    }
    g.finish();
}

fn bitpacked_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank_f2");
    for &n in &[256usize, 512, 1024] {
        let m = random_matrix(n, 2, 2);
        g.bench_with_input(BenchmarkId::new("bitpacked", n), &m, |b, m| {
            b.iter(|| rank_bitpacked(black_box(m)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("generic", n), &m, |b, m| {
            b.iter(|| rank(black_box(m)))
        });
    }
    g.finish();
}

fn fermat_colength(c: &mut Criterion) {
    let mut g = c.benchmark_group("colength_fermat");
    g.sample_size(10);
    for &(p, q) in &[(7u32, 49u64), (7, 343), (13, 169)] {
        let ring =
            RingPresentation::hypersurface(FieldCtx::prime(p).unwrap(), "x^3+y^3+z^3").unwrap();
        let ideal = IdealSpec::parse(&ring, "x,y,z").unwrap();
        g.bench_function(BenchmarkId::new(format!("F{p}"), q), |b| {
            b.iter(|| colength(&ring, &ideal, q).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, dense_rank, bitpacked_rank, fermat_colength);
criterion_main!(benches);
