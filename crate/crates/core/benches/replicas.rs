use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lifshitz_core::glauber::hitting::{default_horizon, tau_plus_single};
use lifshitz_core::glauber::RateRule;
use lifshitz_core::lattice::{BoundaryField, Domain, Shape};
use lifshitz_core::parallel::map_replicas_seq;
use lifshitz_core::rng::derive_seed;

fn replicas(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau_plus_replicas");
    group.sample_size(10);
    for l in [8, 16] {
        let dom = Domain::new(Shape::Cube { dim: 2, half_width: l / 2 }, &BoundaryField::Plus).unwrap();
        let budget = default_horizon(&dom);
        let run = |r: u64| tau_plus_single(&dom, RateRule::Infinite, budget, derive_seed(1, r)).tau;
        group.bench_with_input(BenchmarkId::new("sequential", l), &l, |b, _| b.iter(|| map_replicas_seq(32, run)));
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", l), &l, |b, _| {
            b.iter(|| lifshitz_core::parallel::map_replicas_par(32, run))
        });
    }
    group.finish();
}

criterion_group!(benches, replicas);
criterion_main!(benches);
