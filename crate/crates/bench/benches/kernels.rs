use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tensorcoh::invariants as inv;
use tensorcoh::module::GradedModule;
use tensorcoh::ops;
use tensorcoh::resolution::{syzygy, Over, Resolution};
use tensorcoh::vector::ModuleOrder;
use tensorcoh_bench::{ambient, cyclic4, quadrics, ring};

fn groebner(c: &mut Criterion) {
    let mut g = c.benchmark_group("buchberger");
    let s = ambient(5);
    let cyc = cyclic4(&s);
    let quad = quadrics(&s);
    g.bench_function("cyclic4-homogenized", |b| b.iter(|| tensorcoh::buchberger(&cyc).unwrap()));
    g.bench_function("four-quadrics", |b| b.iter(|| tensorcoh::buchberger(&quad).unwrap()));
    g.finish();
}

fn orders() -> [(&'static str, ModuleOrder); 2] {
    [("pot", ModuleOrder::PositionOverTerm), ("top", ModuleOrder::TermOverPosition)]
}

fn resolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("resolve-residue-field");
    for n in [4, 5] {
        for (name, order) in orders() {
            let r = ring(n, order);
            let k = GradedModule::residue_field(&r);
            g.bench_with_input(BenchmarkId::new(name, n), &k, |b, k| {
                b.iter(|| Resolution::compute(k, Over::Quotient, n + 1).unwrap())
            });
        }
    }
    g.finish();
}

fn local_cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("h-vector");
    g.sample_size(10);
    for (name, order) in orders() {
        let r3 = ring(3, order);
        let m = GradedModule::maximal_ideal(&r3).unwrap();
        g.bench_function(BenchmarkId::new("maximal-square-3", name), |b| {
            b.iter(|| inv::h_vector(&ops::tensor(&m, &m).unwrap()).unwrap())
        });
        let r4 = ring(4, order);
        let syz = syzygy(&GradedModule::residue_field(&r4), 3, Over::Quotient).unwrap();
        g.bench_function(BenchmarkId::new("last-syzygy-with-dual-4", name), |b| {
            b.iter(|| {
                let t = ops::tensor(&syz, &ops::dual(&syz).unwrap()).unwrap();
                inv::h_vector(&t).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, groebner, resolve, local_cohomology);
criterion_main!(benches);
