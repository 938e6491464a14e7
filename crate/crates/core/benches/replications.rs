use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hilreg::experiments::{run_cell_with, ExperimentSpec, RuleKind, TestOperator};
use hilreg::procgen::ProfileKind;
use hilreg::Execution;

fn cell(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_cell");
    group.sample_size(10);
    for n in [320, 1280] {
        let mut spec = ExperimentSpec::new(ProfileKind::LAMBDA1, TestOperator::Psi3, 1.0, n);
        spec.runs = 16;
        spec.rules = vec![RuleKind::Cv, RuleKind::Predict];
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, n), &spec, |b, s| {
                b.iter(|| run_cell_with(s, exec).expect("cell runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, cell);
criterion_main!(benches);
