//! Sequential against rayon-parallel execution for the main sweeps.

use cassini::analysis::{verify_inclusion, InclusionTheorem};
use cassini::balls::{trace_2d, BallSpec, TraceOptions};
use cassini::moebius::{distortion_experiment, Direction};
use cassini::{Domain, Execution, Point};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn tracing(c: &mut Criterion) {
    let ball =
        BallSpec::cassinian(Domain::half_space(2).unwrap(), Point::xy(0.0, 1.0), 0.8).unwrap();
    let mut group = c.benchmark_group("trace_2d");
    group.sample_size(20);
    for (name, exec) in MODES {
        let opts = TraceOptions {
            rays: 720,
            exec,
            ..Default::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| trace_2d(&ball, &opts).unwrap())
        });
    }
    group.finish();
}

fn distortion(c: &mut Criterion) {
    let a = Point::xy(0.5, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<(Point, Point)> = (0..20_000)
        .map(|_| {
            let mut draw = || loop {
                let p = Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if p.norm() < 1.0 && p.norm() > 0.0 {
                    return p;
                }
            };
            (draw(), draw())
        })
        .collect();
    let mut group = c.benchmark_group("distortion");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| distortion_experiment(&a, &pairs, Direction::Forward, exec).unwrap())
        });
    }
    group.finish();
}

fn inclusion(c: &mut Criterion) {
    let domain = Domain::punctured_plane();
    let x = Point::xy(1.0, 0.0);
    let mut group = c.benchmark_group("inclusion_c_j");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(1);
                verify_inclusion(InclusionTheorem::CJ, &domain, &x, 0.5, 500, &mut rng, exec)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, tracing, distortion, inclusion);
criterion_main!(benches);
