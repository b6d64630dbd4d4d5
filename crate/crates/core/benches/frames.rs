//! Frame throughput of the experiment driver, frames run in sequence vs across the rayon pool.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use noma_core::experiment::{compute_rows, ExperimentSpec, Scheme, SweepVariable};
use noma_core::model::SystemConfig;
use noma_core::ExecMode;

fn spec(frames: usize, mode: ExecMode) -> ExperimentSpec {
    ExperimentSpec {
        schemes: vec![Scheme::MatchingIwf, Scheme::MatchingGp, Scheme::Alimari],
        sweep: SweepVariable::None,
        values: Vec::new(),
        frames,
        base: SystemConfig::with_dimensions(20, 10, 4),
        mode,
        ..ExperimentSpec::default()
    }
}

fn frames(c: &mut Criterion) {
    let mut group = c.benchmark_group("frames");
    group.sample_size(10);
    let n = 16;
    group.throughput(Throughput::Elements(n as u64));
    let mut modes = vec![("sequential", ExecMode::Sequential)];
    if cfg!(feature = "parallel") {
        modes.push(("parallel", ExecMode::Parallel));
    }
    for (label, mode) in modes {
        let s = spec(n, mode);
        group.bench_with_input(BenchmarkId::new(label, n), &s, |b, s| {
            b.iter(|| black_box(compute_rows(s).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, frames);
criterion_main!(benches);
