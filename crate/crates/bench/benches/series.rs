use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hilbrep_bench::{k3_with_involution, nodal_curve, table};
use hilbrep_core::goettsche::{goettsche_series, k3_trace_series};
use hilbrep_core::jacobian::jac_euler_rep;
use hilbrep_core::qseries::symplectic_eta_row;
use hilbrep_core::K3Action;

fn goettsche(c: &mut Criterion) {
    let k3 = k3_with_involution();
    let mut g = c.benchmark_group("goettsche");
    for order in [5, 10, 20] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &n| {
            b.iter(|| goettsche_series(&k3, n).unwrap())
        });
    }
    g.finish();
}

fn k3_trace(c: &mut Criterion) {
    let t = table("Z5");
    c.bench_function("k3_trace/Z5/order20", |b| {
        b.iter(|| k3_trace_series(&t, K3Action::Symplectic, 1, 20).unwrap())
    });
}

fn eta(c: &mut Criterion) {
    let row = symplectic_eta_row(3).unwrap();
    c.bench_function("eta/3/order40", |b| b.iter(|| row.expand(40)));
}

fn jacobian(c: &mut Criterion) {
    let mut g = c.benchmark_group("jacobian");
    for n in [2, 6, 12] {
        let curve = nodal_curve(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &curve, |b, cv| b.iter(|| jac_euler_rep(cv).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, goettsche, k3_trace, eta, jacobian);
criterion_main!(benches);
