use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pprq_core::bidir::{backward_phase, derive_params, single_pair_ppr, Multipliers};
use pprq_core::classic::{bippr_pair, monte_carlo_pair, rbs_default_levels, rbs_default_theta, rbs_single_target, AlgoParams};
use pprq_core::instances::{generate, parameter_presets, Family};
use pprq_core::{DirectedGraph, NodeId, OracleHandle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ALPHA: f64 = 0.2;
const EPS: f64 = 0.2;
const P_F: f64 = 0.1;
const N: usize = 4096;

fn instance(delta: f64) -> (DirectedGraph, NodeId, NodeId) {
    let spec = parameter_presets(Family::SpAvg, N, N * 8, delta, ALPHA).unwrap().swapped();
    let (g, meta) = generate(&spec).unwrap();
    (g, meta.source.unwrap(), meta.target)
}

fn pair_estimators(c: &mut Criterion) {
    let mut group = c.benchmark_group("single_pair");
    group.sample_size(20);
    for k in [6, 9] {
        let delta = 2f64.powi(-k);
        let (g, s, t) = instance(delta);
        let params = AlgoParams::new(ALPHA, delta, EPS, P_F).unwrap();
        let r_max = params.balanced_r_max(g.average_degree());
        let new = derive_params(ALPHA, delta, EPS, P_F, g.node_count(), Multipliers::default()).unwrap();
        let id = format!("2^-{k}");

        group.bench_with_input(BenchmarkId::new("monte_carlo", &id), &delta, |b, _| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            b.iter(|| {
                let mut o = OracleHandle::full(&g, 1);
                black_box(monte_carlo_pair(&mut o, s, t, &params, &mut rng).unwrap().estimate)
            })
        });
        group.bench_with_input(BenchmarkId::new("bippr", &id), &delta, |b, _| {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            b.iter(|| {
                let mut o = OracleHandle::full(&g, 2);
                black_box(bippr_pair(&mut o, s, t, &params, r_max, &mut rng).unwrap().estimate)
            })
        });
        group.bench_with_input(BenchmarkId::new("single_pair_ppr", &id), &delta, |b, _| {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            b.iter(|| {
                let mut o = OracleHandle::full(&g, 3);
                black_box(single_pair_ppr(&mut o, s, t, &new, &mut rng).unwrap().estimate)
            })
        });
        group.bench_with_input(BenchmarkId::new("backward_phase", &id), &delta, |b, _| {
            let mut rng = ChaCha8Rng::seed_from_u64(4);
            b.iter(|| {
                let mut o = OracleHandle::full(&g, 4);
                black_box(backward_phase(&mut o, t, ALPHA, &new.schedule, &mut rng).unwrap().push_counts().len())
            })
        });
    }
    group.finish();
}

fn single_target(c: &mut Criterion) {
    let delta = 2f64.powi(-8);
    let (g, _, t) = instance(delta);
    let theta = rbs_default_theta(EPS, delta, P_F);
    let levels = rbs_default_levels(ALPHA, EPS, delta);
    c.bench_function("rbs_single_target", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        b.iter(|| {
            let mut o = OracleHandle::full(&g, 5);
            black_box(rbs_single_target(&mut o, t, ALPHA, theta, levels, &mut rng).unwrap())
        })
    });
}

criterion_group!(benches, pair_estimators, single_target);
criterion_main!(benches);
