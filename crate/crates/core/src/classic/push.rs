use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::oracle::OutDegreeCache;
use crate::{Direction, GraphAccess, NodeId, Result};

/// Reserves and residues of a backward push towards a fixed target.
///
/// Maintains `π(s,t) = p(s) + Σ_v π(s,v)·r(v)` for every `s`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PushFrontier {
    pub target: NodeId,
    pub alpha: f64,
    pub r_max: f64,
    pub reserve: Vec<f64>,
    pub residue: Vec<f64>,
    pub pushes: usize,
    #[serde(skip)]
    queue: VecDeque<NodeId>,
    #[serde(skip)]
    queued: Vec<bool>,
    #[serde(skip)]
    degrees: OutDegreeCache,
}

impl PushFrontier {
    /// Unit residue on `target`, nothing pushed yet.
    pub fn new(node_count: usize, target: NodeId, alpha: f64, r_max: f64) -> Self {
        let mut residue = vec![0.0; node_count];
        residue[target] = 1.0;
        Self {
            target,
            alpha,
            r_max,
            reserve: vec![0.0; node_count],
            residue,
            pushes: 0,
            queue: VecDeque::new(),
            queued: vec![false; node_count],
            degrees: OutDegreeCache::new(),
        }
    }

    fn enqueue_if_active(&mut self, v: NodeId) {
        if !self.queued[v] && self.residue[v] > 0.0 && self.residue[v] >= self.r_max {
            self.queued[v] = true;
            self.queue.push_back(v);
        }
    }

    pub fn max_residue(&self) -> f64 {
        self.residue.iter().copied().fold(0.0, f64::max)
    }
}

/// Moves an α-fraction of `r(v)` into `p(v)` and spreads the rest over the
/// in-neighbors `u` of `v` as `(1-α)·r(v)/d_out(u)`.
pub fn push_back<G: GraphAccess + ?Sized>(o: &mut G, v: NodeId, state: &mut PushFrontier) -> Result<()> {
    let r = std::mem::take(&mut state.residue[v]);
    if r == 0.0 {
        return Ok(());
    }
    let alpha = state.alpha;
    state.reserve[v] += alpha * r;
    state.pushes += 1;
    let d_in = o.in_degree(v)?;
    for i in 0..d_in {
        let u = o.neighbor(v, i, Direction::In)?;
        let d_out = state.degrees.get(o, u)?;
        state.residue[u] += (1.0 - alpha) * r / d_out as f64;
        state.enqueue_if_active(u);
    }
    Ok(())
}

/// Backward push from `t` until every residue is below `r_max`.
///
/// Afterwards `p(s) ≤ π(s,t) < p(s) + r_max` for every `s`.
pub fn approx_contributions<G: GraphAccess + ?Sized>(
    o: &mut G,
    t: NodeId,
    alpha: f64,
    r_max: f64,
) -> Result<PushFrontier> {
    approx_contributions_observed(o, t, alpha, r_max, |_, _| {})
}

/// [`approx_contributions`] calling `observe(v, state)` after each push of `v`.
pub fn approx_contributions_observed<G, F>(
    o: &mut G,
    t: NodeId,
    alpha: f64,
    r_max: f64,
    mut observe: F,
) -> Result<PushFrontier>
where
    G: GraphAccess + ?Sized,
    F: FnMut(NodeId, &PushFrontier),
{
    let n = o.node_count();
    if t >= n {
        return Err(crate::Error::NodeIdOutOfRange { node: t, node_count: n });
    }
    let mut state = PushFrontier::new(n, t, alpha, r_max);
    state.enqueue_if_active(t);
    while let Some(v) = state.queue.pop_front() {
        state.queued[v] = false;
        if state.residue[v] >= r_max {
            push_back(o, v, &mut state)?;
            observe(v, &state);
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_single_source, exact_single_target};
    use crate::{Capabilities, DirectedGraph, OracleHandle};

    #[test]
    fn singleton_push_returns_residue() {
        let g = DirectedGraph::build(&[(0, 0)], 1).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let mut st = PushFrontier::new(1, 0, 0.2, 0.5);
        push_back(&mut o, 0, &mut st).unwrap();
        assert!((st.reserve[0] - 0.2).abs() < 1e-15);
        assert!((st.residue[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn chain_push() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let mut st = PushFrontier::new(2, 1, 0.2, 0.5);
        push_back(&mut o, 1, &mut st).unwrap();
        assert!((st.residue[0] - 0.8).abs() < 1e-15);
        assert!((st.reserve[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn r_max_one_pushes_target_once() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let st = approx_contributions(&mut o, 1, 0.2, 1.0).unwrap();
        assert_eq!(st.pushes, 1);
        assert!(st.max_residue() < 1.0);
    }

    #[test]
    fn chain_sandwich() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let st = approx_contributions(&mut o, 1, 0.2, 0.05).unwrap();
        assert!(st.reserve[0] > 0.75 && st.reserve[0] <= 0.8);
    }

    #[test]
    fn invariant_after_every_push() {
        let edges = [(0, 1), (0, 2), (1, 2), (2, 0), (2, 3), (3, 3), (3, 1)];
        let g = DirectedGraph::build(&edges, 4).unwrap();
        let truth: Vec<Vec<f64>> =
            (0..4).map(|s| exact_single_source(&g, s, 0.15, 1e-13).unwrap().values).collect();
        let target = exact_single_target(&g, 3, 0.15, 1e-13).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let mut checks = 0;
        approx_contributions_observed(&mut o, 3, 0.15, 1e-4, |_, st| {
            for s in 0..4 {
                let lhs = st.reserve[s] + (0..4).map(|v| truth[s][v] * st.residue[v]).sum::<f64>();
                assert!((lhs - target.get(s)).abs() < 1e-9);
            }
            checks += 1;
        })
        .unwrap();
        assert!(checks > 5);
    }
}
