use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use psiseries::numeric::{ln_gamma, BigReal, Ring};
use psiseries::par;
use psiseries::recurrences::{gf_coefficients, Family};

const PREC: u32 = 512;

fn seq_vec(n: usize) -> Vec<BigReal> {
    (0..n).map(|i| BigReal::from_i64(i as i64 + 1, PREC).recip()).collect()
}

// Σ_j a_j a_{n−j}, the inner loop of every quadratic recurrence
fn convolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("convolution");
    for n in [64usize, 256, 1024] {
        let a = seq_vec(n + 1);
        let zero = BigReal::zero(PREC);
        g.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| par::sum_map(0..n + 1, &zero, |j, acc| acc.add_mul(&a[j], &a[n - j])))
        });
        g.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| par::sum_map_seq(0..n + 1, &zero, |j, acc| acc.add_mul(&a[j], &a[n - j])))
        });
    }
    g.finish();
}

fn gamma_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("ln_gamma_table");
    let v = BigReal::parse("0.5615528128088302749107049", PREC).unwrap();
    for n in [64usize, 256] {
        let arg = |m: usize| &(&v * m as i64) + 1;
        g.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| par::map_collect(0..n, |m| ln_gamma(&arg(m), PREC).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| (0..n).map(|m| ln_gamma(&arg(m), PREC).unwrap()).collect::<Vec<_>>())
        });
    }
    g.finish();
}

fn coefficients(c: &mut Criterion) {
    let mut g = c.benchmark_group("gf_coefficients");
    g.sample_size(10);
    g.bench_function("bst_1500", |b| b.iter(|| gf_coefficients(black_box(&Family::bst()), 1500, PREC).unwrap()));
    g.finish();
}

criterion_group!(benches, convolution, gamma_table, coefficients);
criterion_main!(benches);
