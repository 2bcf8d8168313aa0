use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mdl_bench::{instance, Fragment, Polynomial};
use mdl_core::random::{random_3cnf, seeded};
use mdl_core::semantics::check;
use mdl_core::Construction;

fn polynomial(c: &mut Criterion) {
    for algo in [Polynomial::Topdown, Polynomial::Flat] {
        let mut group = c.benchmark_group(format!("{algo:?}").to_lowercase());
        for n in [8, 16, 32, 64] {
            let inst = instance(algo.fragment(), n as u64, n, 12);
            group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
                b.iter(|| algo.check(black_box(inst)))
            });
        }
        group.finish();
    }
}

fn backtracking(c: &mut Criterion) {
    let mut group = c.benchmark_group("backtrack");
    for n in [4, 6, 8] {
        let inst = instance(Fragment::Full, n as u64, n, 8);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| check(&inst.structure, &inst.team, black_box(&inst.formula)).holds)
        });
    }
    group.finish();
}

fn reductions(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduction");
    group.sample_size(20);
    let cnf = random_3cnf(&mut seeded(11), 6, 8);
    for construction in Construction::ALL {
        let r = construction.reduce(&cnf).unwrap();
        group.bench_function(construction.name(), |b| {
            b.iter(|| check(&r.structure, &r.team, black_box(&r.formula)).holds)
        });
    }
    group.finish();
}

criterion_group!(benches, polynomial, backtracking, reductions);
criterion_main!(benches);
