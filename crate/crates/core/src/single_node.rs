//! Estimators for the PageRank-style value `π(t) = (1/n) Σ_s π(s,t)`.
//!
//! The adaptive estimator runs randomized backward search with a halving
//! guess of `δ`. The other two reduce to a single pair through a virtual
//! source `s'` pointing at every node, where `π_{G'}(s',t) = (1-α)·π(t)`.

use rand::Rng;

use crate::bidir::{derive_params, single_pair_ppr, Multipliers};
use crate::classic::{bippr_pair, rbs_default_levels, rbs_default_theta, rbs_single_target, AlgoParams};
use crate::{
    Capabilities, DirectedGraph, Direction, Error, GraphAccess, NodeId, OracleHandle, QueryKind, QueryStats, Result,
};

/// `G'` on top of an oracle for `G`: node `n` is a virtual source with an
/// edge to every real node.
///
/// Real nodes report `s'` as one extra in-neighbor, listed last (also in the
/// sorted order, since its out-degree `n` is maximal and its id largest).
/// Answers about `s'` cost one query of the matching kind, and a uniform
/// out-neighbor of `s'` costs one `JUMP`.
#[derive(Debug)]
pub struct SuperSourceView<'a, 'g> {
    base: &'a mut OracleHandle<'g>,
    n: usize,
}

impl<'a, 'g> SuperSourceView<'a, 'g> {
    pub fn new(base: &'a mut OracleHandle<'g>) -> Self {
        let n = base.graph_node_count();
        Self { base, n }
    }

    /// Id of the virtual source.
    pub fn source(&self) -> NodeId {
        self.n
    }

    fn base_graph(&self) -> &DirectedGraph {
        self.base.graph()
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if v > self.n {
            return Err(Error::NodeIdOutOfRange { node: v, node_count: self.n + 1 });
        }
        Ok(())
    }

    /// Index of `s'` in the in-list of real node `v`, or an error past it.
    fn virtual_in_slot(&mut self, v: NodeId, index: usize, kind: QueryKind) -> Result<Option<NodeId>> {
        let d = self.base_graph().in_degree(v);
        if index < d {
            return Ok(None);
        }
        if index > d {
            return Err(Error::IndexOutOfRange { node: v, index, degree: d + 1 });
        }
        self.base.charge(kind)?;
        Ok(Some(self.n))
    }
}

impl GraphAccess for SuperSourceView<'_, '_> {
    fn node_count(&self) -> usize {
        self.n + 1
    }

    fn edge_count(&self) -> usize {
        self.base.edge_count() + self.n
    }

    fn capabilities(&self) -> Capabilities {
        self.base.capabilities()
    }

    fn stats(&self) -> QueryStats {
        self.base.stats()
    }

    fn degree(&mut self, v: NodeId, dir: Direction) -> Result<usize> {
        self.check(v)?;
        match (v == self.n, dir) {
            (true, Direction::Out) => self.base.charge(QueryKind::DegOut).map(|_| self.n),
            (true, Direction::In) => self.base.charge(QueryKind::DegIn).map(|_| 0),
            (false, Direction::Out) => self.base.degree(v, dir),
            (false, Direction::In) => self.base.degree(v, dir).map(|d| d + 1),
        }
    }

    fn neighbor(&mut self, v: NodeId, index: usize, dir: Direction) -> Result<NodeId> {
        self.check(v)?;
        if v == self.n {
            let degree = if dir == Direction::Out { self.n } else { 0 };
            if index >= degree {
                return Err(Error::IndexOutOfRange { node: v, index, degree });
            }
            self.base.charge(QueryKind::Out)?;
            return Ok(index);
        }
        if dir == Direction::In {
            if let Some(s) = self.virtual_in_slot(v, index, QueryKind::In)? {
                return Ok(s);
            }
        }
        self.base.neighbor(v, index, dir)
    }

    fn in_sorted(&mut self, v: NodeId, index: usize) -> Result<NodeId> {
        self.check(v)?;
        if v == self.n {
            return Err(Error::IndexOutOfRange { node: v, index, degree: 0 });
        }
        match self.virtual_in_slot(v, index, QueryKind::InSorted)? {
            Some(s) => Ok(s),
            None => self.base.in_sorted(v, index),
        }
    }

    fn adj(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == self.n || v == self.n {
            self.base.charge(QueryKind::Adj)?;
            return Ok(u == self.n && v != self.n);
        }
        self.base.adj(u, v)
    }

    /// Uniform over the real nodes.
    fn jump(&mut self) -> Result<NodeId> {
        self.base.jump()
    }

    fn random_out_neighbor<R: Rng + ?Sized>(&mut self, u: NodeId, rng: &mut R) -> Result<NodeId> {
        if u == self.n {
            self.base.jump()
        } else {
            self.base.random_out_neighbor(u, rng)
        }
    }
}

/// `G'` as a standalone graph, for checking the reduction.
pub fn with_super_source(g: &DirectedGraph) -> Result<DirectedGraph> {
    let n = g.node_count();
    let mut edges: Vec<_> = g.edges().collect();
    edges.extend((0..n).map(|v| (n, v)));
    DirectedGraph::build(&edges, n + 1)
}

fn check_args(t: NodeId, n: usize, alpha: f64, eps: f64, p_f: f64) -> Result<()> {
    if t >= n {
        return Err(Error::NodeIdOutOfRange { node: t, node_count: n });
    }
    for (name, x) in [("alpha", alpha), ("eps", eps), ("p_f", p_f)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidArgument(format!("{name} must lie in (0,1), got {x}")));
        }
    }
    Ok(())
}

/// Number of halvings the adaptive loop may take, `⌈log₂(2n/α)⌉`.
pub fn adaptive_rounds(n: usize, alpha: f64) -> usize {
    ((2.0 * n as f64 / alpha).log2().ceil() as usize).max(1)
}

/// Randomized backward search at `δ = 1, 1/2, 1/4, …`, returning the first
/// estimate exceeding `(1+ε)δ`. Once `δ ≤ α/(2n)` the round's estimate is
/// accepted as is, which is safe because `π(t) ≥ α/n`. Each round runs with
/// failure budget `p_f/⌈log₂(2n/α)⌉` and per-pair accuracy `ε/2`.
pub fn single_node_adaptive<R: Rng + ?Sized>(
    o: &mut OracleHandle<'_>,
    t: NodeId,
    alpha: f64,
    eps: f64,
    p_f: f64,
    rng: &mut R,
) -> Result<f64> {
    o.require(Capabilities::BASE.with_in_sorted())?;
    let n = o.node_count();
    check_args(t, n, alpha, eps, p_f)?;
    let p_round = p_f / adaptive_rounds(n, alpha) as f64;
    let floor = alpha / (2.0 * n as f64);
    let mut delta = 1.0;
    loop {
        let theta = rbs_default_theta(eps / 2.0, delta, p_round);
        let levels = rbs_default_levels(alpha, eps / 2.0, delta);
        let per_source = rbs_single_target(o, t, alpha, theta, levels, rng)?;
        let estimate = per_source.iter().sum::<f64>() / n as f64;
        if estimate > (1.0 + eps) * delta || delta <= floor {
            return Ok(estimate);
        }
        delta /= 2.0;
    }
}

/// Balanced bidirectional estimate of `π(s',t)/(1-α)` with `δ = α/(2n)`.
pub fn single_node_avg_jump<R: Rng + ?Sized>(
    o: &mut OracleHandle<'_>,
    t: NodeId,
    alpha: f64,
    eps: f64,
    p_f: f64,
    rng: &mut R,
) -> Result<f64> {
    o.require(Capabilities::BASE.with_jump())?;
    let n = o.node_count();
    check_args(t, n, alpha, eps, p_f)?;
    let delta = alpha / (2.0 * n as f64);
    let params = AlgoParams::new(alpha, delta, eps, p_f)?;
    let mut view = SuperSourceView::new(o);
    let d = view.edge_count() as f64 / view.node_count() as f64;
    let s = view.source();
    let est = bippr_pair(&mut view, s, t, &params, params.balanced_r_max(d), rng)?;
    Ok(est.estimate / (1.0 - alpha))
}

/// The leveled randomized estimate of `π(s',t)/(1-α)` with `δ = α/(2n)`.
pub fn single_node_avg_full<R: Rng + ?Sized>(
    o: &mut OracleHandle<'_>,
    t: NodeId,
    alpha: f64,
    eps: f64,
    p_f: f64,
    rng: &mut R,
) -> Result<f64> {
    o.require(Capabilities::ALL)?;
    let n = o.node_count();
    check_args(t, n, alpha, eps, p_f)?;
    let params = derive_params(alpha, alpha / (2.0 * n as f64), eps, p_f, n + 1, Multipliers::default())?;
    let mut view = SuperSourceView::new(o);
    let s = view.source();
    let est = single_pair_ppr(&mut view, s, t, &params, rng)?;
    Ok(est.estimate / (1.0 - alpha))
}
