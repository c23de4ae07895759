use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use upl_bench::{instances, ironable, sequences};
use upl_core::analysis::{analyze_conditions, quasi_concave_closure};
use upl_core::fixtures::inst_b;
use upl_core::ironing::iron_instance;
use upl_core::lp::optimal_mechanism;

fn revenue_lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("revenue_lp");
    group.sample_size(20);
    for (n, d) in [(4, 2), (8, 2), (10, 3)] {
        let insts = instances(1, 4, n, d);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}x{d}")),
            &insts,
            |b, insts| {
                b.iter(|| {
                    for inst in insts {
                        black_box(optimal_mechanism(inst));
                    }
                })
            },
        );
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    for len in [8, 64, 512] {
        let seqs = sequences(2, 16, len);
        group.bench_with_input(BenchmarkId::from_parameter(len), &seqs, |b, seqs| {
            b.iter(|| {
                for s in seqs {
                    black_box(quasi_concave_closure(s));
                }
            })
        });
    }
    group.finish();
}

fn ironing(c: &mut Criterion) {
    let mut group = c.benchmark_group("ironing");
    let inst = inst_b();
    let cutoffs = upl_core::analysis::CutoffVector::from_labels(&[1, 4]);
    group.bench_function("two_goods_example", |b| {
        b.iter(|| black_box(iron_instance(&inst, &cutoffs).unwrap()))
    });
    for (n, d) in [(6, 2), (10, 3)] {
        let cases = ironable(3, 4, n, d);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}x{d}")),
            &cases,
            |b, cases| {
                b.iter(|| {
                    for (inst, cutoffs) in cases {
                        black_box(iron_instance(inst, cutoffs).ok());
                    }
                })
            },
        );
    }
    group.finish();
}

fn conditions(c: &mut Criterion) {
    let insts = instances(4, 8, 10, 3);
    c.bench_function("analyze_conditions/10x3", |b| {
        b.iter(|| {
            for inst in &insts {
                black_box(analyze_conditions(inst));
            }
        })
    });
}

criterion_group!(benches, revenue_lp, closure, ironing, conditions);
criterion_main!(benches);
