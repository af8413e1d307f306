use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cyclodyne::cyclotomy::{ModulusTag, Partition};
use cyclodyne::ntcore::make_params;
use cyclodyne::verify::{eta_product_expr, twin, verify_det_with};
use cyclodyne::{Execution, SequenceClass};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn twin_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("twin_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 200), &200u64, |b, &max_p| {
            b.iter(|| black_box(twin::twin_sweep(max_p, false, exec).unwrap()))
        });
    }
    group.finish();
}

fn det(c: &mut Criterion) {
    let params = make_params(17, 19, None).unwrap();
    let mut group = c.benchmark_group("verify_det");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "17x19"), |b| {
            b.iter(|| black_box(verify_det_with(&params, SequenceClass::Dh1, 4, 0, exec).unwrap()))
        });
    }
    group.finish();
}

fn eta(c: &mut Criterion) {
    let part = Partition::build(&make_params(59, 61, None).unwrap()).unwrap();
    let mut group = c.benchmark_group("eta_product_expr");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "59x61"), |b| {
            b.iter(|| black_box(eta_product_expr(ModulusTag::N, &part, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, twin_sweep, det, eta);
criterion_main!(benches);
