//! Deterministic generators for the lower-bound graph families, each with
//! designated nodes and the closed-form walk probability they are built
//! around.
//!
//! Most families hide one edge swap: two edges `(u1,v1)` and `(u2,v2)` are
//! replaced by `(u1,v2)` and `(u2,v1)`, which leaves every degree unchanged
//! while opening a path from the source to the target. Node sets occupy
//! contiguous id ranges, recorded as [`Role`]s. Regular bipartite layers use
//! circulant wiring, and nodes that would have no out-edge get a self-loop.

mod builder;
mod presets;
mod random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{DirectedGraph, Error, NodeId, Result};
use builder::Builder;

pub use builder::Role;
pub use presets::parameter_presets;
pub use random::random_graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    FolklorePair,
    SpWorst,
    SpAvg,
    StWorstAdj,
    StWorstFull,
    StAvgAdj,
    StAvgJump,
    StAvgFull,
    SnAvgAdj,
    SnAvgInsorted,
    SnWorstFull,
    SnAvgXor,
    SnAvgFull,
    OutputSizeSt,
}

/// Which estimation problem a family is built against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    SinglePair,
    SingleTarget,
    SingleNode,
}

impl Family {
    pub const ALL: [Family; 14] = [
        Family::FolklorePair,
        Family::SpWorst,
        Family::SpAvg,
        Family::StWorstAdj,
        Family::StWorstFull,
        Family::StAvgAdj,
        Family::StAvgJump,
        Family::StAvgFull,
        Family::SnAvgAdj,
        Family::SnAvgInsorted,
        Family::SnWorstFull,
        Family::SnAvgXor,
        Family::SnAvgFull,
        Family::OutputSizeSt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::FolklorePair => "folklore_pair",
            Family::SpWorst => "sp_worst",
            Family::SpAvg => "sp_avg",
            Family::StWorstAdj => "st_worst_adj",
            Family::StWorstFull => "st_worst_full",
            Family::StAvgAdj => "st_avg_adj",
            Family::StAvgJump => "st_avg_jump",
            Family::StAvgFull => "st_avg_full",
            Family::SnAvgAdj => "sn_avg_adj",
            Family::SnAvgInsorted => "sn_avg_insorted",
            Family::SnWorstFull => "sn_worst_full",
            Family::SnAvgXor => "sn_avg_xor",
            Family::SnAvgFull => "sn_avg_full",
            Family::OutputSizeSt => "output_size_st",
        }
    }

    pub fn problem(self) -> Problem {
        match self {
            Family::FolklorePair | Family::SpWorst | Family::SpAvg => Problem::SinglePair,
            Family::SnAvgAdj | Family::SnAvgInsorted | Family::SnWorstFull | Family::SnAvgXor | Family::SnAvgFull => {
                Problem::SingleNode
            }
            _ => Problem::SingleTarget,
        }
    }

    /// Whether the swap exchanges edge heads. The folklore construction
    /// instead redirects one self-loop, which shifts two in-degrees.
    pub fn swap_preserves_degrees(self) -> bool {
        !matches!(self, Family::FolklorePair | Family::OutputSizeSt)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

/// Which candidate edges to swap: `e1` indexes the family's first edge set,
/// `e2` its second, restricted to edges entering group `group` for the
/// grouped families.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SwapSpec {
    pub e1: usize,
    pub e2: usize,
    pub group: usize,
}

/// An extra component with `nodes` nodes and `edges` edges, unreachable from
/// and unable to reach the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Padding {
    pub nodes: usize,
    pub edges: usize,
}

fn one() -> usize {
    1
}

/// Parameters of one instance.
///
/// `n` is the size of the large layers, `d` the light regular degree, `l`
/// and `big_d` the structural sizes `L` and `D`. `group` defaults to `L`. `k` is
/// the fan-out of the folklore and output-size constructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    #[serde(default = "one")]
    pub d: usize,
    #[serde(default = "one", rename = "L")]
    pub l: usize,
    #[serde(default = "one", rename = "D")]
    pub big_d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap: Option<SwapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<Padding>,
    /// Single-pair average case without `IN-SORTED`: `|U1| = D`, `|V1| = L`.
    /// For the output-size family, selects the two-hop variant with `k` leaves.
    #[serde(default)]
    pub adj_variant: bool,
}

impl InstanceSpec {
    pub fn new(family: Family, n: usize, alpha: f64) -> Self {
        Self {
            family,
            n,
            d: 1,
            l: 1,
            big_d: 1,
            group: None,
            k: None,
            alpha,
            swap: None,
            padding: None,
            adj_variant: false,
        }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_ld(mut self, l: usize, big_d: usize) -> Self {
        self.l = l;
        self.big_d = big_d;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_swap(mut self, swap: SwapSpec) -> Self {
        self.swap = Some(swap);
        self
    }

    pub fn swapped(self) -> Self {
        self.with_swap(SwapSpec::default())
    }

    pub fn with_padding(mut self, nodes: usize, edges: usize) -> Self {
        self.padding = Some(Padding { nodes, edges });
        self
    }

    pub fn group_size(&self) -> usize {
        self.group.unwrap_or(self.l)
    }
}

/// Designated nodes, roles and closed forms of a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub family: Family,
    pub problem: Problem,
    /// Source of the designated pair; `None` for single-node families.
    pub source: Option<NodeId>,
    pub target: NodeId,
    /// Every node sharing the target's closed form (the swapped group, say).
    pub target_set: Role,
    pub roles: Vec<Role>,
    /// Closed form before and after the swap: `π(s,t)` for pair and target
    /// families, `π(t)` for single-node families.
    pub pi_pre: f64,
    pub pi_post: f64,
    pub swapped: bool,
    /// The two removed edges, when swapped.
    pub swap_edges: Option<[(NodeId, NodeId); 2]>,
    pub node_count: usize,
    pub edge_count: usize,
}

impl InstanceMeta {
    /// The closed form for this instance as generated.
    pub fn closed_form(&self) -> f64 {
        if self.swapped {
            self.pi_post
        } else {
            self.pi_pre
        }
    }

    pub fn role(&self, name: &str) -> Option<&Role> {
        self.roles.iter().find(|r| r.name == name)
    }

    pub fn role_of(&self, v: NodeId) -> Option<&str> {
        self.roles.iter().find(|r| r.contains(v)).map(|r| r.name.as_str())
    }

    /// Closed form for the pair `(s,t)`, if it is the designated one (any `t`
    /// in the target set counts).
    pub fn closed_form_for(&self, s: Option<NodeId>, t: NodeId) -> Result<f64> {
        if s == self.source && self.target_set.contains(t) {
            Ok(self.closed_form())
        } else {
            Err(Error::NoClosedForm(format!("{} has no closed form for ({s:?}, {t})", self.family)))
        }
    }
}

fn violation(msg: impl Into<String>) -> Error {
    Error::SpecConstraintViolation(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(violation(msg()))
    }
}

fn pick(set: &[(NodeId, NodeId)], i: usize, name: &str) -> Result<(NodeId, NodeId)> {
    set.get(i)
        .copied()
        .ok_or_else(|| violation(format!("swap index {i} >= |{name}| = {}", set.len())))
}

/// Grouped layer `V2 → X → W2` and the edges of `e2_pool` entering group `g`.
struct Groups {
    size: usize,
    count: usize,
}

impl Groups {
    fn new(n: usize, size: usize) -> Result<Self> {
        ensure(size >= 1 && size <= n, || format!("1 <= group size {size} <= n = {n}"))?;
        Ok(Self { size, count: n.div_ceil(size) })
    }

    fn len(&self, g: usize, n: usize) -> usize {
        ((g + 1) * self.size).min(n) - g * self.size
    }
}

/// Generates the graph and its metadata.
pub fn generate(spec: &InstanceSpec) -> Result<(DirectedGraph, InstanceMeta)> {
    ensure(spec.n >= 1, || "n >= 1".into())?;
    ensure(spec.alpha > 0.0 && spec.alpha < 1.0, || format!("0 < alpha = {} < 1", spec.alpha))?;
    let q = 1.0 - spec.alpha;
    let n = spec.n;
    let (l, big_d, d) = (spec.l, spec.big_d, spec.d);
    let sw = spec.swap.unwrap_or_default();
    let mut b = Builder::default();

    // Each arm leaves (e1 pool, e2 pool, source, target, target set, pre, post)
    // with π values as unnormalized sums for the single-node families.
    let (e1_pool, e2_pool, source, target, target_set, pre, post);
    match spec.family {
        Family::FolklorePair => {
            let k = spec.k.unwrap_or(n);
            ensure(k >= 1 && k <= n, || format!("1 <= k = {k} <= n = {n}"))?;
            let s = b.node("s");
            let v = b.set("V", k);
            let u = b.set("U", k);
            let t = b.node("t");
            for x in v.clone() {
                b.edge(s, x);
            }
            b.self_loops(v.clone());
            b.all_to(u.clone(), t);
            b.edge(t, t);
            e1_pool = v.clone().map(|x| (x, x)).collect::<Vec<_>>();
            e2_pool = u.clone().map(|x| (x, t)).collect::<Vec<_>>();
            (source, target, target_set) = (Some(s), t, t..t + 1);
            (pre, post) = (0.0, q.powi(3) / k as f64);
        }
        Family::SpWorst => {
            ensure(l >= 1 && big_d >= 1, || format!("L = {l} >= 1 and D = {big_d} >= 1"))?;
            let s = b.node("s");
            let u1 = b.set("U1", l);
            let v1 = b.set("V1", big_d);
            let u2 = b.set("U2", l);
            let v2 = b.set("V2", big_d);
            let t = b.node("t");
            for x in u1.clone() {
                b.edge(s, x);
            }
            e1_pool = b.complete(u1, v1.clone());
            b.self_loops(v1);
            e2_pool = b.complete(u2, v2.clone());
            b.all_to(v2, t);
            b.edge(t, t);
            (source, target, target_set) = (Some(s), t, t..t + 1);
            (pre, post) = (0.0, q.powi(3) / (l * big_d) as f64);
        }
        Family::SpAvg => {
            ensure(l >= 1 && l <= n, || format!("1 <= L = {l} <= n = {n}"))?;
            ensure(big_d >= 1 && big_d <= n, || format!("1 <= D = {big_d} <= n = {n}"))?;
            let (a, c) = if spec.adj_variant { (big_d, l) } else { (l, big_d) };
            let groups = Groups::new(n, spec.group_size())?;
            ensure(sw.group < groups.count, || format!("group {} < {}", sw.group, groups.count))?;
            let s = b.node("s");
            let u1 = b.set("U1", a);
            let v1 = b.set("V1", c);
            let u2 = b.set("U2", n);
            let v2 = b.set("V2", n);
            let x = b.set("X", groups.count);
            let w2 = b.set("W2", n);
            for y in u1.clone() {
                b.edge(s, y);
            }
            e1_pool = b.complete(u1, v1.clone());
            b.self_loops(v1);
            let wired = b.circulant(u2, v2.clone(), big_d);
            b.grouped(v2.clone(), x, w2.clone(), groups.size);
            e2_pool = into_group(&wired, v2.start, &groups, sw.group);
            let gs = groups.len(sw.group, n);
            let start = w2.start + sw.group * groups.size;
            (source, target, target_set) = (Some(s), start, start..start + gs);
            (pre, post) = (0.0, q.powi(4) / (a * c * gs) as f64);
        }
        Family::StWorstAdj | Family::SnAvgAdj | Family::StAvgAdj => {
            ensure(d >= 1 && d <= n, || format!("1 <= d = {d} <= n = {n}"))?;
            if spec.family == Family::SnAvgAdj {
                let u1 = b.set("U1", n);
                let u = b.node("u");
                b.all_to(u1, u);
                b.edge(u, u);
                let u2 = b.set("U2", n);
                let v2 = b.set("V2", n);
                let x = b.node("x");
                let w2 = b.set("W2", n);
                e2_pool = b.circulant(u2, v2.clone(), d);
                b.all_to(v2, x);
                for w in w2.clone() {
                    b.edge(x, w);
                }
                b.self_loops(w2.clone());
                e1_pool = vec![(u, u)];
                (source, target, target_set) = (None, w2.start, w2);
                let (nf, df) = (n as f64, d as f64);
                pre = 1.0 + q / nf + q * q + q.powi(3);
                post = pre + q.powi(3) / nf + q.powi(4) - q.powi(3) / (df * nf) + q.powi(4) / (df * nf);
            } else {
                let u = b.node("u");
                b.edge(u, u);
                let u2 = b.set("U2", n);
                let v2 = b.set("V2", n);
                e1_pool = vec![(u, u)];
                let wired = b.circulant(u2, v2.clone(), d);
                source = Some(u);
                pre = 0.0;
                if spec.family == Family::StWorstAdj {
                    let t = b.node("t");
                    b.all_to(v2, t);
                    b.edge(t, t);
                    e2_pool = wired;
                    (target, target_set) = (t, t..t + 1);
                    post = q * q;
                } else {
                    let groups = Groups::new(n, spec.group_size())?;
                    ensure(sw.group < groups.count, || format!("group {} < {}", sw.group, groups.count))?;
                    let x = b.set("X", groups.count);
                    let w2 = b.set("W2", n);
                    b.grouped(v2.clone(), x, w2.clone(), groups.size);
                    e2_pool = into_group(&wired, v2.start, &groups, sw.group);
                    let gs = groups.len(sw.group, n);
                    let start = w2.start + sw.group * groups.size;
                    (target, target_set) = (start, start..start + gs);
                    post = q.powi(3) / gs as f64;
                }
            }
        }
        Family::StWorstFull => {
            ensure(big_d >= 1 && big_d <= n, || format!("1 <= D = {big_d} <= n = {n}"))?;
            let u1 = b.set("U1", n);
            let v1 = b.set("V1", n);
            let u2 = b.set("U2", n);
            let v2 = b.set("V2", n);
            let t = b.node("t");
            e1_pool = b.circulant(u1, v1.clone(), big_d);
            b.self_loops(v1);
            e2_pool = b.circulant(u2, v2.clone(), big_d);
            b.all_to(v2, t);
            b.edge(t, t);
            source = Some(pick(&e1_pool, sw.e1, "E1")?.0);
            (target, target_set) = (t, t..t + 1);
            (pre, post) = (0.0, q * q / big_d as f64);
        }
        Family::StAvgJump | Family::StAvgFull => {
            ensure(big_d >= 1 && big_d <= n, || format!("1 <= D = {big_d} <= n = {n}"))?;
            let deg2 = if spec.family == Family::StAvgFull { big_d } else { d };
            ensure(deg2 >= 1 && deg2 <= n, || format!("1 <= d = {deg2} <= n = {n}"))?;
            let groups = Groups::new(n, spec.group_size())?;
            ensure(sw.group < groups.count, || format!("group {} < {}", sw.group, groups.count))?;
            let u1 = b.set("U1", n);
            let v1 = b.set("V1", n);
            let u2 = b.set("U2", n);
            let v2 = b.set("V2", n);
            let x = b.set("X", groups.count);
            let w2 = b.set("W2", n);
            e1_pool = b.circulant(u1, v1.clone(), big_d);
            b.self_loops(v1);
            let wired = b.circulant(u2, v2.clone(), deg2);
            b.grouped(v2.clone(), x, w2.clone(), groups.size);
            e2_pool = into_group(&wired, v2.start, &groups, sw.group);
            source = Some(pick(&e1_pool, sw.e1, "E1")?.0);
            let gs = groups.len(sw.group, n);
            let start = w2.start + sw.group * groups.size;
            (target, target_set) = (start, start..start + gs);
            (pre, post) = (0.0, q.powi(3) / (big_d * gs) as f64);
        }
        Family::SnAvgInsorted => {
            let u1 = b.set("U1", n);
            let u = b.node("u");
            b.all_to(u1, u);
            b.edge(u, u);
            let v2 = b.set("V2", n);
            let x = b.node("x");
            let w2 = b.set("W2", n);
            e2_pool = b.all_to(v2, x);
            for w in w2.clone() {
                b.edge(x, w);
            }
            b.self_loops(w2.clone());
            e1_pool = vec![(u, u)];
            (source, target, target_set) = (None, w2.start, w2);
            let nf = n as f64;
            pre = 1.0 + q / nf + q * q;
            post = 1.0 + q / nf + (nf - 1.0) * q * q / nf + q * q / nf + q.powi(3) / nf + q.powi(3);
        }
        Family::SnWorstFull => {
            ensure(l >= 1 && l <= big_d, || format!("1 <= L = {l} <= D = {big_d}"))?;
            let xs = b.set("X", n);
            let x = b.node("x");
            let u1 = b.set("U1", l);
            let v1 = b.set("V1", big_d);
            let u2 = b.set("U2", big_d);
            let v2 = b.set("V2", l);
            let tt = b.set("T", big_d - l);
            let t = b.node("t");
            b.all_to(xs, x);
            for y in u1.clone() {
                b.edge(x, y);
            }
            e1_pool = b.complete(u1, v1.clone());
            b.self_loops(v1);
            let all = b.complete(u2, v2.start..tt.end);
            e2_pool = all.into_iter().filter(|&(_, v)| v2.contains(&v)).collect();
            b.self_loops(tt);
            b.all_to(v2, t);
            b.edge(t, t);
            (source, target, target_set) = (None, t, t..t + 1);
            let (lf, df) = (l as f64, big_d as f64);
            pre = 1.0 + lf * q + lf * q * q;
            post = pre + q.powi(3) * (1.0 + n as f64 * q) / (lf * df);
        }
        Family::SnAvgXor | Family::SnAvgFull => {
            let deg = if spec.family == Family::SnAvgFull { big_d } else { d };
            ensure(deg >= 1 && deg <= n, || format!("1 <= degree {deg} <= n = {n}"))?;
            ensure(l >= 1, || format!("L = {l} >= 1"))?;
            let groups = Groups::new(n, spec.group_size())?;
            ensure(sw.group < groups.count, || format!("group {} < {}", sw.group, groups.count))?;
            let w1 = b.set("W1", n);
            let u = b.node("u");
            let u1 = b.set("U1", l);
            let v1 = b.set("V1", deg);
            let u2 = b.set("U2", n);
            let v2 = b.set("V2", n);
            let x = b.set("X", groups.count);
            let w2 = b.set("W2", n);
            b.all_to(w1, u);
            for y in u1.clone() {
                b.edge(u, y);
            }
            e1_pool = b.complete(u1, v1.clone());
            b.self_loops(v1);
            let wired = b.circulant(u2, v2.clone(), deg);
            b.grouped(v2.clone(), x, w2.clone(), groups.size);
            e2_pool = into_group(&wired, v2.start, &groups, sw.group);
            let gs = groups.len(sw.group, n) as f64;
            let start = w2.start + sw.group * groups.size;
            (source, target, target_set) = (None, start, start..start + gs as usize);
            pre = 1.0 + q / gs + q * q + q.powi(3);
            post = pre + q.powi(4) * (1.0 + n as f64 * q) / (l as f64 * deg as f64 * gs);
        }
        Family::OutputSizeSt => {
            ensure(spec.swap.is_none(), || "output-size instances have no swap".into())?;
            let ins = b.set("S", n);
            e1_pool = Vec::new();
            e2_pool = Vec::new();
            if spec.adj_variant {
                let k = spec.k.unwrap_or(n);
                ensure(k >= 1 && k <= n, || format!("1 <= k = {k} <= n = {n}"))?;
                let g = b.node("g");
                let w = b.set("W", k);
                b.all_to(ins.clone(), g);
                for y in w.clone() {
                    b.edge(g, y);
                }
                b.self_loops(w.clone());
                (source, target, target_set) = (Some(ins.start), w.start, w);
                (pre, post) = (q * q / k as f64, q * q / k as f64);
            } else {
                let t = b.node("t");
                b.all_to(ins.clone(), t);
                b.edge(t, t);
                (source, target, target_set) = (Some(ins.start), t, t..t + 1);
                (pre, post) = (q, q);
            }
        }
    }

    let mut swap_edges = None;
    if spec.swap.is_some() {
        let e1 = pick(&e1_pool, sw.e1, "E1")?;
        let e2 = pick(&e2_pool, sw.e2, "E2")?;
        if spec.family.swap_preserves_degrees() {
            b.swap(e1, e2)?;
        } else {
            // folklore: V_i's self-loop becomes V_i → U_j
            b.replace(e1, (e1.0, e2.0))?;
        }
        swap_edges = Some([e1, e2]);
    }
    if let Some(p) = spec.padding {
        ensure(p.nodes >= 1 && p.edges >= p.nodes && p.edges <= p.nodes * p.nodes, || {
            format!("padding needs nodes <= edges = {} <= nodes^2 with nodes = {}", p.edges, p.nodes)
        })?;
        b.padding(p.nodes, p.edges);
    }

    let node_count = b.node_count();
    let (pi_pre, pi_post) = if spec.family.problem() == Problem::SingleNode {
        (pre / node_count as f64, post / node_count as f64)
    } else {
        (pre, post)
    };
    let graph = DirectedGraph::build(&b.edges, node_count)?;
    let meta = InstanceMeta {
        family: spec.family,
        problem: spec.family.problem(),
        source,
        target,
        target_set: Role { name: "target_set".into(), start: target_set.start, len: target_set.len() },
        roles: b.roles,
        pi_pre,
        pi_post,
        swapped: spec.swap.is_some(),
        swap_edges,
        node_count,
        edge_count: graph.edge_count(),
    };
    Ok((graph, meta))
}

/// Edges of a circulant layer whose head lies in group `g`.
fn into_group(wired: &[(NodeId, NodeId)], v_start: NodeId, groups: &Groups, g: usize) -> Vec<(NodeId, NodeId)> {
    wired.iter().copied().filter(|&(_, v)| (v - v_start) / groups.size == g).collect()
}

/// Closed-form value for the designated pair (or target) of `spec`.
pub fn closed_form_pi(spec: &InstanceSpec) -> Result<f64> {
    Ok(generate(spec)?.1.closed_form())
}
