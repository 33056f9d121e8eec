use pprq_core::bidir::{backward_phase, LevelSchedule};
use pprq_core::classic::{
    approx_contributions_observed, bippr_pair, monte_carlo_pair, power_iteration_source, power_iteration_target,
    rbs_single_target, single_target_jump_mc, AlgoParams,
};
use pprq_core::exact::{brute_force_pair, exact_pagerank, exact_single_source, exact_single_target};
use pprq_core::harness::{fit_power_law, is_success, ProblemVariant};
use pprq_core::instances::{generate, Family, InstanceSpec, SwapSpec};
use pprq_core::single_node::{adaptive_rounds, with_super_source};
use pprq_core::{Capabilities, DirectedGraph, Direction, Error, GraphAccess, NodeId, OracleHandle, QueryStats, Result};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ALPHA: f64 = 0.2;

/// Arbitrary graph on up to `max_n` nodes; nodes left without out-edges get a self-loop.
fn graph(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..4 * n).prop_map(move |mut edges| {
            edges.sort_unstable();
            edges.dedup();
            let mut has_out = vec![false; n];
            edges.iter().for_each(|&(u, _)| has_out[u] = true);
            edges.extend((0..n).filter(|&u| !has_out[u]).map(|u| (u, u)));
            DirectedGraph::build(&edges, n).unwrap()
        })
    })
}

/// Counts every call it forwards, independently of the handle's own counters.
struct Counting<'a, 'g> {
    inner: &'a mut OracleHandle<'g>,
    calls: u64,
}

impl GraphAccess for Counting<'_, '_> {
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }
    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }
    fn stats(&self) -> QueryStats {
        self.inner.stats()
    }
    fn degree(&mut self, v: NodeId, dir: Direction) -> Result<usize> {
        self.calls += 1;
        self.inner.degree(v, dir)
    }
    fn neighbor(&mut self, v: NodeId, index: usize, dir: Direction) -> Result<NodeId> {
        self.calls += 1;
        self.inner.neighbor(v, index, dir)
    }
    fn in_sorted(&mut self, v: NodeId, index: usize) -> Result<NodeId> {
        self.calls += 1;
        self.inner.in_sorted(v, index)
    }
    fn adj(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.calls += 1;
        self.inner.adj(u, v)
    }
    fn jump(&mut self) -> Result<NodeId> {
        self.calls += 1;
        self.inner.jump()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn in_sorted_is_ordered_by_out_degree(g in graph(30)) {
        for v in 0..g.node_count() {
            let list = g.in_neighbors_sorted(v);
            for w in list.windows(2) {
                let key = |u: u32| (g.out_degree(u as NodeId), u);
                prop_assert!(key(w[0]) < key(w[1]));
            }
        }
    }

    #[test]
    fn edge_list_round_trip(g in graph(30)) {
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = DirectedGraph::read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn every_call_is_counted(g in graph(25), seed in any::<u64>()) {
        let n = g.node_count();
        let (s, t) = ((seed % n as u64) as NodeId, ((seed >> 8) % n as u64) as NodeId);
        let params = AlgoParams::new(ALPHA, 0.2, 0.3, 0.2).unwrap().with_walk_constant(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut o = OracleHandle::full(&g, seed);
        let mut c = Counting { inner: &mut o, calls: 0 };
        monte_carlo_pair(&mut c, s, t, &params, &mut rng).unwrap();
        bippr_pair(&mut c, s, t, &params, 0.1, &mut rng).unwrap();
        rbs_single_target(&mut c, t, ALPHA, 0.05, 8, &mut rng).unwrap();
        single_target_jump_mc(&mut c, t, &params, &mut rng).unwrap();
        power_iteration_target(&mut c, t, ALPHA, 4).unwrap();
        let calls = c.calls;
        let stats = o.stats();
        prop_assert_eq!(stats.total, calls);
        prop_assert_eq!(stats.kind_sum(), calls);
    }

    #[test]
    fn in_sorted_estimators_are_gated(g in graph(10)) {
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let schedule = LevelSchedule::uniform(3, 0.1, 1.0).unwrap();
        prop_assert!(matches!(rbs_single_target(&mut o, 0, ALPHA, 0.1, 3, &mut rng), Err(Error::CapabilityDisabled(_))));
        prop_assert!(matches!(backward_phase(&mut o, 0, ALPHA, &schedule, &mut rng), Err(Error::CapabilityDisabled(_))));
        let params = AlgoParams::new(ALPHA, 0.2, 0.3, 0.2).unwrap();
        prop_assert!(matches!(single_target_jump_mc(&mut o, 0, &params, &mut rng), Err(Error::CapabilityDisabled(_))));
    }

    #[test]
    fn exact_vectors_are_consistent(g in graph(25)) {
        let n = g.node_count();
        let tol = 1e-12;
        let rows: Vec<_> = (0..n).map(|s| exact_single_source(&g, s, ALPHA, tol).unwrap()).collect();
        for (s, row) in rows.iter().enumerate() {
            prop_assert!((row.sum() - 1.0).abs() <= n as f64 * tol);
            prop_assert!(row.get(s) >= ALPHA);
        }
        let pr = exact_pagerank(&g, ALPHA, tol).unwrap();
        for t in 0..n {
            let col = exact_single_target(&g, t, ALPHA, tol).unwrap();
            for s in 0..n {
                prop_assert!((col.get(s) - rows[s].get(t)).abs() <= 2.0 * tol);
            }
            let avg = rows.iter().map(|r| r.get(t)).sum::<f64>() / n as f64;
            prop_assert!((pr.get(t) - avg).abs() <= 2.0 * tol);
            prop_assert!(pr.get(t) >= ALPHA / n as f64 - tol);
        }
    }

    #[test]
    fn push_keeps_the_invariant(g in graph(20), t_pick in any::<usize>(), r_max in 1e-4f64..0.5) {
        let n = g.node_count();
        let t = t_pick % n;
        let pi: Vec<_> = (0..n).map(|s| exact_single_source(&g, s, ALPHA, 1e-13).unwrap()).collect();
        let mut worst: f64 = 0.0;
        let mut o = OracleHandle::full(&g, 0);
        let f = approx_contributions_observed(&mut o, t, ALPHA, r_max, |_, st| {
            for (s, row) in pi.iter().enumerate() {
                let rhs = st.reserve[s] + (0..n).map(|v| row.get(v) * st.residue[v]).sum::<f64>();
                worst = worst.max((rhs - row.get(t)).abs());
            }
        }).unwrap();
        prop_assert!(worst <= 1e-9, "invariant off by {}", worst);
        for s in 0..n {
            let p = pi[s].get(t);
            prop_assert!(f.reserve[s] <= p + 1e-12 && p <= f.reserve[s] + r_max);
        }
    }

    #[test]
    fn power_iteration_is_truncated_walk_sum(g in graph(12), levels in 1usize..12) {
        let n = g.node_count();
        let mut o = OracleHandle::full(&g, 0);
        for t in 0..n {
            let back = power_iteration_target(&mut o, t, ALPHA, levels).unwrap();
            for s in 0..n {
                let brute = brute_force_pair(&g, s, t, ALPHA, levels).unwrap();
                prop_assert!((back[s] - brute).abs() <= 1e-12);
            }
        }
        for s in 0..n {
            let fwd = power_iteration_source(&mut o, s, ALPHA, levels).unwrap();
            let exact = exact_single_source(&g, s, ALPHA, 1e-13).unwrap();
            for t in 0..n {
                let err = exact.get(t) - fwd[t];
                prop_assert!(err >= -1e-12 && err <= (1.0 - ALPHA).powi(levels as i32 + 1) + 1e-12);
            }
        }
    }

    #[test]
    fn backward_phase_respects_thresholds(
        g in graph(40),
        seed in any::<u64>(),
        levels in 1usize..10,
        theta in 0.001f64..0.5,
        gamma in 0.01f64..=1.0,
    ) {
        let n = g.node_count();
        let t = (seed % n as u64) as NodeId;
        let schedule = LevelSchedule::uniform(levels, theta, gamma).unwrap();
        let mut o = OracleHandle::full(&g, seed);
        let st = backward_phase(&mut o, t, ALPHA, &schedule, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(st.termination_bound_holds());
        for i in 0..levels {
            for u in 0..n {
                prop_assert!(st.residue(i, u) >= 0.0 && st.residue_prime(i, u) >= 0.0);
                prop_assert!(st.pushed(u, i) || st.residue_prime(i, u) <= theta);
            }
        }
        for u in 0..n {
            prop_assert!(st.reserve(u) >= 0.0);
        }
    }

    #[test]
    fn super_source_scales_pagerank(g in graph(30)) {
        let n = g.node_count();
        let aug = with_super_source(&g).unwrap();
        let from_virtual = exact_single_source(&aug, n, ALPHA, 1e-13).unwrap();
        let pr = exact_pagerank(&g, ALPHA, 1e-13).unwrap();
        for t in 0..n {
            prop_assert!((from_virtual.get(t) - (1.0 - ALPHA) * pr.get(t)).abs() <= 1e-9);
        }
    }

    #[test]
    fn adaptive_rounds_reach_the_floor(n in 1usize..1_000_000, alpha in 0.01f64..0.99) {
        let rounds = adaptive_rounds(n, alpha);
        prop_assert!(0.5f64.powi(rounds as i32) <= alpha / (2.0 * n as f64));
        prop_assert!(rounds == 1 || 0.5f64.powi(rounds as i32 - 1) > alpha / (2.0 * n as f64));
    }

    #[test]
    fn success_predicate(est in 0.0f64..1.0, exact in 0.0f64..1.0, eps in 0.01f64..0.5, delta in 1e-4f64..0.5) {
        let pair = (est - exact).abs() < eps * if exact > delta { exact } else { delta };
        prop_assert_eq!(is_success(ProblemVariant::Pair, est, exact, eps, delta), pair);
        prop_assert_eq!(is_success(ProblemVariant::Target, est, exact, eps, delta), pair);
        prop_assert_eq!(is_success(ProblemVariant::Node, est, exact, eps, delta), (est - exact).abs() < eps * exact);
    }

    #[test]
    fn power_law_fit_recovers_exponent(a in -2.0f64..2.0, c in 0.01f64..100.0, k in 4usize..10) {
        let pts: Vec<_> = (0..k).map(|i| {
            let x = 2f64.powi(-(i as i32));
            (x, c * x.powf(a))
        }).collect();
        let fit = fit_power_law(&pts).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-9);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swaps_preserve_degrees(e1 in 0usize..4, e2 in 0usize..4, group in 0usize..2) {
        for family in [Family::SpWorst, Family::SpAvg, Family::StWorstFull, Family::StAvgJump, Family::StAvgFull, Family::SnAvgFull] {
            let spec = match family {
                Family::StWorstFull => InstanceSpec::new(family, 12, ALPHA).with_d(4).with_ld(1, 3),
                Family::SnAvgFull => InstanceSpec::new(family, 12, ALPHA).with_ld(2, 3),
                _ => InstanceSpec::new(family, 12, ALPHA).with_d(3).with_ld(3, 3),
            };
            prop_assert!(family.swap_preserves_degrees());
            prop_assert!(generate(&spec.clone().swapped()).is_ok(), "{}: default swap", family);
            let (g0, _) = generate(&spec).unwrap();
            let swapped = spec.clone().with_swap(SwapSpec { e1, e2, group });
            if let Ok((g1, meta)) = generate(&swapped) {
                prop_assert_eq!(g0.out_degrees(), g1.out_degrees(), "{}", family);
                prop_assert_eq!(g0.in_degrees(), g1.in_degrees(), "{}", family);
                prop_assert_eq!(g0.edge_count(), g1.edge_count());
                let [a, b] = meta.swap_edges.unwrap();
                prop_assert!(!g1.has_edge(a.0, a.1) || a.1 == b.1);
            }
        }
    }

    #[test]
    fn padding_is_neutral(nodes in 1usize..8, extra in 0usize..20) {
        let edges = nodes + extra.min(nodes * nodes - nodes);
        let spec = InstanceSpec::new(Family::SpAvg, 12, ALPHA).with_d(3).with_ld(3, 3).swapped();
        let (g, meta) = generate(&spec).unwrap();
        let (gp, _) = generate(&spec.clone().with_padding(nodes, edges)).unwrap();
        prop_assert_eq!(gp.node_count(), g.node_count() + nodes);
        prop_assert_eq!(gp.edge_count(), g.edge_count() + edges);
        let s = meta.source.unwrap();
        let a = exact_single_source(&g, s, ALPHA, 1e-13).unwrap();
        let b = exact_single_source(&gp, s, ALPHA, 1e-13).unwrap();
        for v in 0..g.node_count() {
            prop_assert!((a.get(v) - b.get(v)).abs() <= 1e-12);
        }
    }
}
