use std::collections::{HashMap, HashSet};

use rand::Rng;

use super::LevelSchedule;
use crate::oracle::OutDegreeCache;
use crate::{Capabilities, DirectedGraph, Direction, Error, GraphAccess, NodeId, Result};

/// Backward-phase state of the leveled randomized push toward `t`.
///
/// Two residue copies are kept per level. `r̂` drives the estimate, while the
/// independently sampled `r̂'` only decides which `(v, i)` get pushed, so the
/// push decisions carry no information about `r̂` itself.
#[derive(Debug, Clone)]
pub struct RandPushState {
    target: NodeId,
    alpha: f64,
    schedule: LevelSchedule,
    residue: Vec<HashMap<NodeId, f64>>,
    residue_prime: Vec<HashMap<NodeId, f64>>,
    reserve: HashMap<NodeId, f64>,
    /// `(level, amount)` for every push of the node, in level order.
    pushes: HashMap<NodeId, Vec<(usize, f64)>>,
    push_counts: Vec<usize>,
    heavy: Vec<NodeId>,
    heavy_set: HashSet<NodeId>,
    out_degrees: OutDegreeCache,
    in_degrees: HashMap<NodeId, usize>,
}

impl RandPushState {
    /// State before any push: `r̂_0(t) = r̂'_0(t) = 1`.
    pub fn new(target: NodeId, alpha: f64, schedule: LevelSchedule) -> Self {
        let levels = schedule.levels;
        let mut residue = vec![HashMap::new(); levels + 1];
        residue[0].insert(target, 1.0);
        Self {
            target,
            alpha,
            residue_prime: residue.clone(),
            residue,
            reserve: HashMap::new(),
            pushes: HashMap::new(),
            push_counts: vec![0; levels],
            heavy: Vec::new(),
            heavy_set: HashSet::new(),
            out_degrees: OutDegreeCache::new(),
            in_degrees: HashMap::new(),
            schedule,
        }
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn schedule(&self) -> &LevelSchedule {
        &self.schedule
    }

    pub fn residue(&self, level: usize, u: NodeId) -> f64 {
        self.residue[level].get(&u).copied().unwrap_or(0.0)
    }

    pub fn residue_prime(&self, level: usize, u: NodeId) -> f64 {
        self.residue_prime[level].get(&u).copied().unwrap_or(0.0)
    }

    /// `r̂(u) = Σ_i r̂_i(u)`.
    pub fn residue_total(&self, u: NodeId) -> f64 {
        self.residue.iter().filter_map(|m| m.get(&u)).sum()
    }

    pub fn reserve(&self, u: NodeId) -> f64 {
        self.reserve.get(&u).copied().unwrap_or(0.0)
    }

    /// Nodes with a nonzero reserve, ascending.
    pub fn reserve_support(&self) -> Vec<NodeId> {
        let mut v: Vec<_> = self.reserve.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn pushed(&self, u: NodeId, level: usize) -> bool {
        self.pushes.get(&u).is_some_and(|p| p.iter().any(|&(l, _)| l == level))
    }

    /// `1_i(u)`: whether residue at level `i` of `u` is still outstanding.
    /// The top level is never pushed.
    pub fn indicator(&self, u: NodeId, level: usize) -> bool {
        level == self.schedule.levels || !self.pushed(u, level)
    }

    pub fn push_counts(&self) -> &[usize] {
        &self.push_counts
    }

    /// Heavy set `V_P`, ascending. Empty until [`Self::mark_heavy`] runs.
    pub fn heavy(&self) -> &[NodeId] {
        &self.heavy
    }

    /// `V_P = {v : p̂(v) > τ}`.
    pub fn mark_heavy(&mut self, tau: f64) {
        self.heavy = self.reserve.iter().filter(|&(_, &p)| p > tau).map(|(&v, _)| v).collect();
        self.heavy.sort_unstable();
        self.heavy_set = self.heavy.iter().copied().collect();
    }

    /// True when every unpushed `(u, i)` below the top level has `r̂'_i(u) ≤ θ_i`.
    pub fn termination_bound_holds(&self) -> bool {
        (0..self.schedule.levels).all(|i| {
            self.residue_prime[i]
                .iter()
                .all(|(&u, &r)| self.pushed(u, i) || r <= self.schedule.theta[i])
        })
    }

    /// `Σ_i 1_i(u) χ_i(u, v)` for `v ∈ N_out(u)`, where `χ_{i+1}(u, v) =
    /// (1-α)·(amount pushed from v at level i)/d_out(u)`. The level-0 term
    /// is handled separately by the callers.
    fn edge_weight(&self, u: NodeId, v: NodeId, d_out: usize) -> f64 {
        let Some(pushes) = self.pushes.get(&v) else {
            return 0.0;
        };
        let scale = (1.0 - self.alpha) / d_out as f64;
        pushes
            .iter()
            .filter(|&&(level, _)| self.indicator(u, level + 1))
            .map(|&(_, amount)| scale * amount)
            .sum()
    }

    fn level_zero(&self, u: NodeId) -> f64 {
        if u == self.target && self.indicator(u, 0) {
            1.0
        } else {
            0.0
        }
    }

    fn in_degree<G: GraphAccess + ?Sized>(&mut self, o: &mut G, v: NodeId) -> Result<usize> {
        if let Some(&d) = self.in_degrees.get(&v) {
            return Ok(d);
        }
        let d = o.in_degree(v)?;
        self.in_degrees.insert(v, d);
        Ok(d)
    }
}

/// Pushes `r̂_i(v)` one level back.
///
/// The reserve of `v` gains `α·r̂_i(v)` and the residue is cleared. Each
/// in-neighbor `u` receives `χ = (1-α)·r̂_i(v)/d_out(u)` exactly when `χ` is at
/// least the receiving granularity `g = γ_{i+1}θ_{i+1}`; otherwise `r̂_{i+1}(u)`
/// and `r̂'_{i+1}(u)` each gain `g` with probability `χ/g`, drawn independently.
/// Both draws come from one scan of the in-list sorted by out-degree, which
/// stops once `χ` falls below both uniform cuts.
pub fn rand_push_threshold<G, R>(
    o: &mut G,
    state: &mut RandPushState,
    v: NodeId,
    level: usize,
    rng: &mut R,
) -> Result<()>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    let top = state.schedule.levels;
    if level >= top {
        return Err(Error::InvalidArgument(format!("cannot push from level {level} of {top}")));
    }
    if state.pushed(v, level) {
        return Err(Error::InvalidArgument(format!("node {v} already pushed at level {level}")));
    }
    let r = state.residue[level].remove(&v).unwrap_or(0.0);
    *state.reserve.entry(v).or_insert(0.0) += state.alpha * r;
    state.pushes.entry(v).or_default().push((level, r));
    state.push_counts[level] += 1;
    if r == 0.0 {
        return Ok(());
    }

    let g = state.schedule.granularity(level + 1);
    let cut_a = rng.random::<f64>() * g;
    let cut_b = rng.random::<f64>() * g;
    let (mut live_a, mut live_b) = (true, true);
    let d_in = state.in_degree(o, v)?;
    for j in 0..d_in {
        let u = o.in_sorted(v, j)?;
        let d_out = state.out_degrees.get(o, u)?;
        let chi = (1.0 - state.alpha) * r / d_out as f64;
        let (inc_a, inc_b) = if chi >= g {
            (chi, chi)
        } else {
            live_a &= chi > cut_a;
            live_b &= chi > cut_b;
            if !live_a && !live_b {
                break;
            }
            (if live_a { g } else { 0.0 }, if live_b { g } else { 0.0 })
        };
        if inc_a > 0.0 {
            *state.residue[level + 1].entry(u).or_insert(0.0) += inc_a;
        }
        if inc_b > 0.0 {
            *state.residue_prime[level + 1].entry(u).or_insert(0.0) += inc_b;
        }
    }
    Ok(())
}

/// Level by level from 0 to `L-1`, pushes every `(v, i)` with `r̂'_i(v) > θ_i`
/// in ascending node order.
pub fn backward_phase<G, R>(
    o: &mut G,
    t: NodeId,
    alpha: f64,
    schedule: &LevelSchedule,
    rng: &mut R,
) -> Result<RandPushState>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    o.require(Capabilities::BASE.with_in_sorted())?;
    if t >= o.node_count() {
        return Err(Error::NodeIdOutOfRange { node: t, node_count: o.node_count() });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let mut state = RandPushState::new(t, alpha, schedule.clone());
    for level in 0..schedule.levels {
        let theta = schedule.theta[level];
        let mut eligible: Vec<NodeId> = state.residue_prime[level]
            .iter()
            .filter(|&(_, &r)| r > theta)
            .map(|(&v, _)| v)
            .collect();
        eligible.sort_unstable();
        for v in eligible {
            rand_push_threshold(o, &mut state, v, level, rng)?;
        }
    }
    Ok(state)
}

/// `R(u) = Σ_i 1_i(u) R_i(u)` by a full, unmetered walk over `N_out(u)`.
/// Meant for validating the estimator, not for use inside it.
pub fn compute_r(g: &DirectedGraph, state: &RandPushState, u: NodeId) -> f64 {
    let out = g.out_neighbors(u);
    state.level_zero(u) + out.iter().map(|&v| state.edge_weight(u, v as NodeId, out.len())).sum::<f64>()
}

/// Unbiased estimate of `R(u)` given the backward state.
///
/// Edges into the heavy set are found by `ADJ` and summed exactly. The rest
/// of `N_out(u)` is covered by `n_s` uniform samples, drawn by rejection when
/// `d_out(u) ≥ 2|V_P|` and otherwise from the materialized difference.
pub fn estimate_r_hat<G, R>(
    o: &mut G,
    state: &mut RandPushState,
    u: NodeId,
    n_s: usize,
    rng: &mut R,
) -> Result<f64>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    if n_s == 0 {
        return Err(Error::InvalidArgument("n_s must be positive".into()));
    }
    let d = state.out_degrees.get(o, u)?;
    let state = &*state;
    let mut est = state.level_zero(u);
    let mut heavy_hits = 0;
    for &v in &state.heavy {
        if o.adj(u, v)? {
            heavy_hits += 1;
            est += state.edge_weight(u, v, d);
        }
    }
    let light = d - heavy_hits;
    if light == 0 {
        return Ok(est);
    }
    let w = light as f64 / n_s as f64;
    if d >= 2 * state.heavy.len() {
        for _ in 0..n_s {
            let v = loop {
                let v = o.neighbor(u, rng.random_range(0..d), Direction::Out)?;
                if !state.heavy_set.contains(&v) {
                    break v;
                }
            };
            est += w * state.edge_weight(u, v, d);
        }
    } else {
        let mut pool = Vec::with_capacity(light);
        for j in 0..d {
            let v = o.neighbor(u, j, Direction::Out)?;
            if !state.heavy_set.contains(&v) {
                pool.push(v);
            }
        }
        for _ in 0..n_s {
            est += w * state.edge_weight(u, pool[rng.random_range(0..pool.len())], d);
        }
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::OracleHandle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain() -> DirectedGraph {
        DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap()
    }

    #[test]
    fn deterministic_schedule_matches_push() {
        // γ = 1 with θ small makes every increment deterministic
        let g = chain();
        let schedule = LevelSchedule::uniform(3, 1e-9, 1.0).unwrap();
        let mut o = OracleHandle::full(&g, 0);
        let st = backward_phase(&mut o, 1, 0.2, &schedule, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        // level 0 → 1: both in-neighbors of t have out-degree 1, χ = 0.8
        assert!((st.reserve(1) - (0.2 + 0.2 * 0.8 + 0.2 * 0.64)).abs() < 1e-12);
        assert!((st.reserve(0) - (0.2 * 0.8 + 0.2 * 0.64)).abs() < 1e-12);
        assert_eq!(st.push_counts(), &[1, 2, 2]);
        assert!(st.termination_bound_holds());
        // only top-level residue remains
        assert!((st.residue(3, 0) - 0.512).abs() < 1e-12);
        assert_eq!(st.residue(2, 0), 0.0);
    }

    #[test]
    fn random_increments_are_unbiased() {
        // t = 0 with self-loop, node 1 → {0, 2}, node 2 self-loop; χ(1) = 0.4
        let g = DirectedGraph::build(&[(0, 0), (1, 0), (1, 2), (2, 2)], 3).unwrap();
        // g = γ_1θ_1 = 0.6 keeps χ(0) = 0.8 deterministic
        let schedule = LevelSchedule::new(vec![0.5, 0.6], vec![1.0, 1.0]).unwrap();
        let trials = 20_000;
        let (mut sum, mut sum_p) = (0.0, 0.0);
        for seed in 0..trials {
            let mut o = OracleHandle::full(&g, seed);
            let st = backward_phase(&mut o, 0, 0.2, &schedule, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            let r = st.residue(1, 1);
            assert!(r == 0.0 || (r - 0.6).abs() < 1e-12);
            sum += r;
            sum_p += st.residue_prime(1, 1);
            assert!((st.residue(1, 0) - 0.8).abs() < 1e-12);
        }
        assert!((sum / trials as f64 - 0.4).abs() < 0.015);
        assert!((sum_p / trials as f64 - 0.4).abs() < 0.015);
    }

    #[test]
    fn compute_r_recovers_target_mass() {
        let g = chain();
        let schedule = LevelSchedule::uniform(2, 0.5, 1.0).unwrap();
        let mut o = OracleHandle::full(&g, 0);
        let st = backward_phase(&mut o, 1, 0.2, &schedule, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        // t pushed at level 0, residue 0.8 lands on both nodes at level 1 and
        // is pushed again (0.8 > 0.5), leaving 0.64 at level 2
        let pi_0 = [0.2, 0.8];
        let lhs = st.reserve(0) + pi_0.iter().enumerate().map(|(u, p)| p * compute_r(&g, &st, u)).sum::<f64>();
        assert!((lhs - 0.8).abs() < 1e-12, "{lhs}");
    }

    #[test]
    fn r_hat_matches_r_in_expectation() {
        // node 0 fans out to five nodes that all feed t = 5
        let mut edges: Vec<_> = (1..5).map(|v| (0, v)).collect();
        edges.push((0, 5));
        edges.extend((1..5).map(|v| (v, 5)));
        edges.push((5, 5));
        let g = DirectedGraph::build(&edges, 6).unwrap();
        let schedule = LevelSchedule::uniform(3, 0.05, 1.0).unwrap();
        let mut o = OracleHandle::full(&g, 0);
        let mut st = backward_phase(&mut o, 5, 0.2, &schedule, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let exact = compute_r(&g, &st, 0);
        for tau in [f64::INFINITY, 0.3, 0.0] {
            st.mark_heavy(tau);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let k = 20_000;
            let mean = (0..k).map(|_| estimate_r_hat(&mut o, &mut st, 0, 2, &mut rng).unwrap()).sum::<f64>() / k as f64;
            assert!((mean - exact).abs() < 0.01 * exact.max(0.1), "tau {tau}: {mean} vs {exact}");
        }
    }

    #[test]
    fn heavy_edges_are_exact() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let schedule = LevelSchedule::uniform(2, 0.5, 1.0).unwrap();
        let mut o = OracleHandle::full(&g, 0);
        let mut st = backward_phase(&mut o, 1, 0.2, &schedule, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        st.mark_heavy(0.0);
        assert_eq!(st.heavy(), &[0, 1]);
        let before = o.stats();
        let est = estimate_r_hat(&mut o, &mut st, 0, 4, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!((est - compute_r(&g, &st, 0)).abs() < 1e-12);
        let used = o.stats().since(&before);
        assert_eq!(used.adj, 2);
        assert_eq!(used.out, 0);
    }

    #[test]
    fn push_guards() {
        let g = chain();
        let schedule = LevelSchedule::uniform(1, 0.5, 1.0).unwrap();
        let mut o = OracleHandle::full(&g, 0);
        let mut st = RandPushState::new(1, 0.2, schedule.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        rand_push_threshold(&mut o, &mut st, 1, 0, &mut rng).unwrap();
        assert!(rand_push_threshold(&mut o, &mut st, 1, 0, &mut rng).is_err());
        assert!(rand_push_threshold(&mut o, &mut st, 0, 1, &mut rng).is_err());
        let mut base = OracleHandle::new(&g, Capabilities::BASE, 0);
        assert!(matches!(
            backward_phase(&mut base, 1, 0.2, &schedule, &mut rng),
            Err(Error::CapabilityDisabled(_))
        ));
    }
}
