use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use quadirr::irregularity::{scan_range, IndexKind};
use quadirr::search::{SearchParams, Searcher};
use quadirr::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan D<500 p<100");
    g.sample_size(10);
    for (name, exec) in MODES {
        for kind in [IndexKind::Chi, IndexKind::D] {
            g.bench_with_input(BenchmarkId::new(name, format!("{kind:?}")), &kind, |b, &kind| {
                b.iter(|| scan_range(5, 500, 100, kind, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search batch m=2 D<=3000");
    g.sample_size(10);
    let params = SearchParams::new(100_000, 2.0, 2, 5, 3_000).with_m_max(2);
    for (name, exec) in MODES {
        let s = Searcher::new(params.clone(), exec).unwrap();
        let cells = s.discriminants().len();
        g.bench_function(name, |b| b.iter(|| s.run_batch(s.start(), cells).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, scan, search);
criterion_main!(benches);
