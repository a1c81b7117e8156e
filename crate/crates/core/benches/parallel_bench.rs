//! Parallel-vs-sequential comparison for the two data-parallel hot paths:
//! the m-convexity grid scan and the corpus run. With the default `parallel`
//! feature the parallel arm uses the rayon pool; built with
//! `--no-default-features` both arms run the sequential code path, which
//! makes the comparison a regression check for the fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fraclab_core::harness::{parse_config, run_corpus_mode, CorpusConfig};
use fraclab_core::parallel::ExecMode;
use fraclab_core::testfuncs::is_m_convex_mode;

fn bench_mconvex_grid(c: &mut Criterion) {
    let g = |x: f64| (x * x + 0.5 * x).powf(1.5);
    let mut group = c.benchmark_group("mconvex_grid");
    for (name, mode) in [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| is_m_convex_mode(&g, 0.7, 3.0, 41, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_corpus_run(c: &mut Criterion) {
    let cfg: CorpusConfig = parse_config(
        "functions = [\"mono3\", \"mono4\", \"exp1\"]\n\
         alphas = [0.5, 1.5]\n\
         intervals = [[0.0, 1.0]]\n\
         ms = [0.5, 1.0]\n\
         qs = [2.0]\n\
         checks = [\"T3\", \"T5\", \"T6\"]\n\
         variants = [\"chain\"]\n",
    )
    .unwrap();
    let mut group = c.benchmark_group("corpus_run");
    group.sample_size(10);
    for (name, mode) in [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| run_corpus_mode(&cfg, mode).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_mconvex_grid, bench_corpus_run);
criterion_main!(benches);
