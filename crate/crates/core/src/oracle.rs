//! The metered adjacency-list oracle.
//!
//! Estimators never see a [`DirectedGraph`] directly; they receive something
//! implementing [`GraphAccess`], and every call through it is counted. The
//! base operations (degree and indexed neighbor in both directions) are always
//! available; `JUMP`, `IN-SORTED` and `ADJ` are gated by [`Capabilities`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{DirectedGraph, Error, NodeId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    DegIn,
    DegOut,
    In,
    Out,
    InSorted,
    Adj,
    Jump,
}

impl QueryKind {
    pub const ALL: [QueryKind; 7] = [
        QueryKind::DegIn,
        QueryKind::DegOut,
        QueryKind::In,
        QueryKind::Out,
        QueryKind::InSorted,
        QueryKind::Adj,
        QueryKind::Jump,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QueryKind::DegIn => "deg_in",
            QueryKind::DegOut => "deg_out",
            QueryKind::In => "in",
            QueryKind::Out => "out",
            QueryKind::InSorted => "in_sorted",
            QueryKind::Adj => "adj",
            QueryKind::Jump => "jump",
        }
    }
}

/// Optional query operations granted to an oracle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct Capabilities {
    pub jump: bool,
    pub in_sorted: bool,
    pub adj: bool,
}

impl Capabilities {
    pub const BASE: Capabilities = Capabilities { jump: false, in_sorted: false, adj: false };
    pub const ALL: Capabilities = Capabilities { jump: true, in_sorted: true, adj: true };

    pub fn allows(&self, kind: QueryKind) -> bool {
        match kind {
            QueryKind::Jump => self.jump,
            QueryKind::InSorted => self.in_sorted,
            QueryKind::Adj => self.adj,
            _ => true,
        }
    }

    /// True when every capability of `required` is also present here.
    pub fn covers(&self, required: &Capabilities) -> bool {
        (!required.jump || self.jump)
            && (!required.in_sorted || self.in_sorted)
            && (!required.adj || self.adj)
    }

    pub fn with_jump(mut self) -> Self {
        self.jump = true;
        self
    }

    pub fn with_in_sorted(mut self) -> Self {
        self.in_sorted = true;
        self
    }

    pub fn with_adj(mut self) -> Self {
        self.adj = true;
        self
    }
}

/// Per-kind query counters. `total` always equals the sum of the others.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    pub deg_in: u64,
    pub deg_out: u64,
    pub in_: u64,
    pub out: u64,
    pub in_sorted: u64,
    pub adj: u64,
    pub jump: u64,
    pub total: u64,
}

impl QueryStats {
    #[inline]
    pub fn record(&mut self, kind: QueryKind) {
        *self.slot(kind) += 1;
        self.total += 1;
    }

    pub fn get(&self, kind: QueryKind) -> u64 {
        match kind {
            QueryKind::DegIn => self.deg_in,
            QueryKind::DegOut => self.deg_out,
            QueryKind::In => self.in_,
            QueryKind::Out => self.out,
            QueryKind::InSorted => self.in_sorted,
            QueryKind::Adj => self.adj,
            QueryKind::Jump => self.jump,
        }
    }

    fn slot(&mut self, kind: QueryKind) -> &mut u64 {
        match kind {
            QueryKind::DegIn => &mut self.deg_in,
            QueryKind::DegOut => &mut self.deg_out,
            QueryKind::In => &mut self.in_,
            QueryKind::Out => &mut self.out,
            QueryKind::InSorted => &mut self.in_sorted,
            QueryKind::Adj => &mut self.adj,
            QueryKind::Jump => &mut self.jump,
        }
    }

    /// Counter-wise difference `self - earlier`.
    pub fn since(&self, earlier: &QueryStats) -> QueryStats {
        let mut d = QueryStats::default();
        for kind in QueryKind::ALL {
            *d.slot(kind) = self.get(kind) - earlier.get(kind);
        }
        d.total = self.total - earlier.total;
        d
    }

    pub fn merge(&mut self, other: &QueryStats) {
        for kind in QueryKind::ALL {
            *self.slot(kind) += other.get(kind);
        }
        self.total += other.total;
    }

    pub fn kind_sum(&self) -> u64 {
        QueryKind::ALL.iter().map(|&k| self.get(k)).sum()
    }
}

/// Query interface shared by the plain oracle and derived views of it.
///
/// `node_count` and `edge_count` are known to the algorithm up front and are
/// not metered.
pub trait GraphAccess {
    fn node_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn capabilities(&self) -> Capabilities;
    fn stats(&self) -> QueryStats;

    fn degree(&mut self, v: NodeId, dir: Direction) -> Result<usize>;
    fn neighbor(&mut self, v: NodeId, index: usize, dir: Direction) -> Result<NodeId>;
    fn in_sorted(&mut self, v: NodeId, index: usize) -> Result<NodeId>;
    fn adj(&mut self, u: NodeId, v: NodeId) -> Result<bool>;
    fn jump(&mut self) -> Result<NodeId>;

    fn out_degree(&mut self, v: NodeId) -> Result<usize> {
        self.degree(v, Direction::Out)
    }

    fn in_degree(&mut self, v: NodeId) -> Result<usize> {
        self.degree(v, Direction::In)
    }

    /// A uniformly random out-neighbor of `u` (one `DEG-OUT` and one `OUT`).
    fn random_out_neighbor<R: Rng + ?Sized>(&mut self, u: NodeId, rng: &mut R) -> Result<NodeId> {
        let d = self.out_degree(u)?;
        let i = rng.random_range(0..d);
        self.neighbor(u, i, Direction::Out)
    }

    /// Fails with `CapabilityDisabled` unless every capability in `required`
    /// is granted.
    fn require(&self, required: Capabilities) -> Result<()> {
        let caps = self.capabilities();
        for (need, have, kind) in [
            (required.jump, caps.jump, QueryKind::Jump),
            (required.in_sorted, caps.in_sorted, QueryKind::InSorted),
            (required.adj, caps.adj, QueryKind::Adj),
        ] {
            if need && !have {
                return Err(Error::CapabilityDisabled(kind));
            }
        }
        Ok(())
    }
}

impl<T: GraphAccess + ?Sized> GraphAccess for &mut T {
    fn node_count(&self) -> usize {
        (**self).node_count()
    }
    fn edge_count(&self) -> usize {
        (**self).edge_count()
    }
    fn capabilities(&self) -> Capabilities {
        (**self).capabilities()
    }
    fn stats(&self) -> QueryStats {
        (**self).stats()
    }
    fn degree(&mut self, v: NodeId, dir: Direction) -> Result<usize> {
        (**self).degree(v, dir)
    }
    fn neighbor(&mut self, v: NodeId, index: usize, dir: Direction) -> Result<NodeId> {
        (**self).neighbor(v, index, dir)
    }
    fn in_sorted(&mut self, v: NodeId, index: usize) -> Result<NodeId> {
        (**self).in_sorted(v, index)
    }
    fn adj(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        (**self).adj(u, v)
    }
    fn jump(&mut self) -> Result<NodeId> {
        (**self).jump()
    }
    fn random_out_neighbor<R: Rng + ?Sized>(&mut self, u: NodeId, rng: &mut R) -> Result<NodeId> {
        (**self).random_out_neighbor(u, rng)
    }
}

/// Capability-gated, metered view of a [`DirectedGraph`].
///
/// Single owner: it holds mutable counters and the PRNG stream that serves
/// `JUMP`. Concurrent trials each create their own handle over a shared graph.
#[derive(Debug, Clone)]
pub struct OracleHandle<'g> {
    graph: &'g DirectedGraph,
    caps: Capabilities,
    stats: QueryStats,
    jump_rng: ChaCha8Rng,
}

impl<'g> OracleHandle<'g> {
    pub fn new(graph: &'g DirectedGraph, caps: Capabilities, jump_seed: u64) -> Self {
        Self {
            graph,
            caps,
            stats: QueryStats::default(),
            jump_rng: ChaCha8Rng::seed_from_u64(jump_seed),
        }
    }

    /// Oracle with every capability enabled.
    pub fn full(graph: &'g DirectedGraph, jump_seed: u64) -> Self {
        Self::new(graph, Capabilities::ALL, jump_seed)
    }

    pub fn graph_node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// The underlying graph, for views that answer part of a query themselves.
    pub(crate) fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn reset_stats(&mut self) {
        self.stats = QueryStats::default();
    }

    /// Records a query answered by a view layered on top of this oracle.
    pub(crate) fn charge(&mut self, kind: QueryKind) -> Result<()> {
        if !self.caps.allows(kind) {
            return Err(Error::CapabilityDisabled(kind));
        }
        self.stats.record(kind);
        Ok(())
    }

    #[inline]
    fn check_node(&self, v: NodeId) -> Result<()> {
        if v >= self.graph.node_count() {
            return Err(Error::NodeIdOutOfRange { node: v, node_count: self.graph.node_count() });
        }
        Ok(())
    }
}

impl GraphAccess for OracleHandle<'_> {
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn capabilities(&self) -> Capabilities {
        self.caps
    }

    fn stats(&self) -> QueryStats {
        self.stats
    }

    fn degree(&mut self, v: NodeId, dir: Direction) -> Result<usize> {
        self.check_node(v)?;
        match dir {
            Direction::In => {
                self.stats.record(QueryKind::DegIn);
                Ok(self.graph.in_degree(v))
            }
            Direction::Out => {
                self.stats.record(QueryKind::DegOut);
                Ok(self.graph.out_degree(v))
            }
        }
    }

    fn neighbor(&mut self, v: NodeId, index: usize, dir: Direction) -> Result<NodeId> {
        self.check_node(v)?;
        let (list, kind) = match dir {
            Direction::In => (self.graph.in_neighbors(v), QueryKind::In),
            Direction::Out => (self.graph.out_neighbors(v), QueryKind::Out),
        };
        let Some(&w) = list.get(index) else {
            return Err(Error::IndexOutOfRange { node: v, index, degree: list.len() });
        };
        self.stats.record(kind);
        Ok(w as NodeId)
    }

    fn in_sorted(&mut self, v: NodeId, index: usize) -> Result<NodeId> {
        if !self.caps.in_sorted {
            return Err(Error::CapabilityDisabled(QueryKind::InSorted));
        }
        self.check_node(v)?;
        let list = self.graph.in_neighbors_sorted(v);
        let Some(&w) = list.get(index) else {
            return Err(Error::IndexOutOfRange { node: v, index, degree: list.len() });
        };
        self.stats.record(QueryKind::InSorted);
        Ok(w as NodeId)
    }

    fn adj(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        if !self.caps.adj {
            return Err(Error::CapabilityDisabled(QueryKind::Adj));
        }
        self.check_node(u)?;
        self.check_node(v)?;
        self.stats.record(QueryKind::Adj);
        Ok(self.graph.has_edge(u, v))
    }

    // Same charges and draw as the default, without the second bounds check.
    #[inline]
    fn random_out_neighbor<R: Rng + ?Sized>(&mut self, u: NodeId, rng: &mut R) -> Result<NodeId> {
        self.check_node(u)?;
        let list = self.graph.out_neighbors(u);
        self.stats.record(QueryKind::DegOut);
        let i = rng.random_range(0..list.len());
        self.stats.record(QueryKind::Out);
        Ok(list[i] as NodeId)
    }

    fn jump(&mut self) -> Result<NodeId> {
        if !self.caps.jump {
            return Err(Error::CapabilityDisabled(QueryKind::Jump));
        }
        self.stats.record(QueryKind::Jump);
        Ok(self.jump_rng.random_range(0..self.graph.node_count()))
    }
}

/// Remembers out-degrees already paid for, so an estimator asks for each
/// `DEG-OUT` at most once per run.
#[derive(Debug, Clone, Default)]
pub struct OutDegreeCache {
    known: std::collections::HashMap<NodeId, usize>,
}

impl OutDegreeCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get<G: GraphAccess + ?Sized>(&mut self, o: &mut G, u: NodeId) -> Result<usize> {
        if let Some(&d) = self.known.get(&u) {
            return Ok(d);
        }
        let d = o.out_degree(u)?;
        self.known.insert(u, d);
        Ok(d)
    }

    /// A value learned without a query (for example from a view that knows it).
    pub fn insert(&mut self, u: NodeId, d: usize) {
        self.known.insert(u, d);
    }
}
