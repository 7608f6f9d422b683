use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use factorkit::oracle::{
    all_morphisms_up_to,
    check_lift, galois_laws, hom_set, pure_by_oracle, random_cp_map, random_stoch, rng,
    BoundedLiftConfig,
};
use factorkit::quant::DEFAULT_TOL;
use factorkit::{FinFunction, Relation};

fn fstoch(c: &mut Criterion) {
    let mut group = c.benchmark_group("fstoch");
    for n in [2, 4, 8] {
        let m = random_stoch(&mut rng(1), n, n);
        group.bench_with_input(BenchmarkId::new("purify", n), &m, |b, m| {
            b.iter(|| black_box(m).purify())
        });
        group.bench_with_input(BenchmarkId::new("copurify", n), &m, |b, m| {
            b.iter(|| black_box(m).copurify())
        });
    }
    group.finish();
}

fn quant(c: &mut Criterion) {
    let mut group = c.benchmark_group("quant");
    for n in [2, 3, 4] {
        let ch = random_cp_map(&mut rng(2), n, n, n).unwrap();
        group.bench_with_input(BenchmarkId::new("kraus", n), &ch, |b, ch| {
            b.iter(|| black_box(ch).kraus(DEFAULT_TOL).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("purify", n), &ch, |b, ch| {
            b.iter(|| black_box(ch).purify(DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    let cfg = BoundedLiftConfig::new(2, 2, 0).unwrap();
    let relations = hom_set::<Relation>(2, 2).unwrap();
    group.bench_function("pure_by_oracle/frel 2→2", |b| {
        b.iter(|| {
            relations
                .iter()
                .filter(|r| pure_by_oracle(*r, &cfg).unwrap())
                .count()
        })
    });
    let f = FinFunction::from_table(2, &[0, 1, 1]).unwrap();
    let g = FinFunction::from_table(2, &[0, 1, 1, 0]).unwrap();
    group.bench_function("check_lift/fset 3→2 vs 4→2", |b| {
        b.iter(|| check_lift(black_box(&f), black_box(&g)).unwrap().holds)
    });
    let universe = all_morphisms_up_to::<FinFunction>(2).unwrap();
    group.bench_function("galois_laws/fset ≤2", |b| {
        b.iter(|| galois_laws(&universe, 10, &cfg).unwrap().passed())
    });
    group.finish();
}

criterion_group!(benches, fstoch, quant, oracle);
criterion_main!(benches);
