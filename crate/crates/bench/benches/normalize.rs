use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ddcat_bench::{workload, WorkloadFamily, SIZES};
use ddcat_core::{decide_eq_exprs, normalize, translate_expr};

fn families(c: &mut Criterion) {
    for (name, family) in [
        ("chain", WorkloadFamily::Chain),
        ("ladder", WorkloadFamily::Ladder),
    ] {
        let mut group = c.benchmark_group(name);
        for n in SIZES {
            let w = workload(family, n, 0).expect("family member");
            group.bench_with_input(BenchmarkId::new("normalize", n), &w, |b, w| {
                b.iter(|| normalize(&w.diagram, &w.sig2).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("translate", n), &w, |b, w| {
                b.iter(|| translate_expr(&w.left, &w.sig).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("check", n), &w, |b, w| {
                b.iter(|| decide_eq_exprs(&w.left, &w.other, &w.sig).unwrap())
            });
        }
        group.finish();
    }
}

criterion_group!(benches, families);
criterion_main!(benches);
