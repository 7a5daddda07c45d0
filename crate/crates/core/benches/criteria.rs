use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use impobs_core::criteria::is_impulse_observable_with;
use impobs_core::random::{random_regular_system, trial_rng};
use impobs_core::suites::{draw_random_systems, equivalence_suite, SuiteConfig};
use impobs_core::{DescriptorSystem, Execution, Strategy};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn mid_size_system() -> DescriptorSystem {
    let mut rng = trial_rng(2024, 0);
    random_regular_system(&mut rng, 8, 2, 5).0
}

fn all_orders(c: &mut Criterion) {
    let sys = mid_size_system();
    let mut group = c.benchmark_group("all_orders_n8");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                is_impulse_observable_with(black_box(&sys), Strategy::AllOrders, exec).unwrap()
            })
        });
    }
    group.finish();
}

fn equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("equivalence_suite_64");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig {
            trials: 64,
            max_n: 5,
            exec,
            ..SuiteConfig::default()
        };
        let draws = draw_random_systems(&cfg);
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| equivalence_suite(cfg, black_box(&draws)))
        });
    }
    group.finish();
}

criterion_group!(benches, all_orders, equivalence);
criterion_main!(benches);
