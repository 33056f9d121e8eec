//! Immutable CSR storage for directed graphs and the edge-list text format.

use std::io::{BufRead, Write};

use crate::{Error, Result};

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

/// Compressed adjacency: `targets[offsets[v]..offsets[v + 1]]` are the
/// neighbors of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    fn from_lists(lists: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for list in lists {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    #[inline]
    fn row(&self, v: NodeId) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// An immutable directed graph without dangling nodes.
///
/// Out-lists keep the order in which edges were supplied. In-lists are kept
/// twice: by source id, and sorted by non-decreasing out-degree of the source
/// (ties by ascending id), which backs the `IN-SORTED` query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    node_count: usize,
    out: Csr,
    out_sorted: Csr,
    inn: Csr,
    in_sorted: Csr,
}

impl DirectedGraph {
    /// Builds a graph from an edge list over nodes `0..node_count`.
    ///
    /// Rejects out-of-range ids, duplicate edges and nodes without out-edges.
    pub fn build(edges: &[(NodeId, NodeId)], node_count: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidArgument("graph needs at least one node".into()));
        }
        if node_count > u32::MAX as usize {
            return Err(Error::InvalidArgument("node count exceeds u32 range".into()));
        }
        let mut out_lists: Vec<Vec<u32>> = vec![Vec::new(); node_count];
        let mut in_lists: Vec<Vec<u32>> = vec![Vec::new(); node_count];
        for &(u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeIdOutOfRange { node, node_count });
                }
            }
            out_lists[u].push(v as u32);
            in_lists[v].push(u as u32);
        }
        let mut out_sorted_lists = out_lists.clone();
        for (u, list) in out_sorted_lists.iter_mut().enumerate() {
            if list.is_empty() {
                return Err(Error::DanglingNode(u));
            }
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u, w[0] as NodeId));
            }
        }
        for list in in_lists.iter_mut() {
            list.sort_unstable();
        }
        let out_degree: Vec<usize> = out_lists.iter().map(Vec::len).collect();
        let in_sorted_lists: Vec<Vec<u32>> = in_lists
            .iter()
            .map(|list| {
                let mut sorted = list.clone();
                sorted.sort_by_key(|&u| (out_degree[u as usize], u));
                sorted
            })
            .collect();
        Ok(Self {
            node_count,
            out: Csr::from_lists(&out_lists),
            out_sorted: Csr::from_lists(&out_sorted_lists),
            inn: Csr::from_lists(&in_lists),
            in_sorted: Csr::from_lists(&in_sorted_lists),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.out.targets.len()
    }

    /// Average degree `m / n`.
    pub fn average_degree(&self) -> f64 {
        self.edge_count() as f64 / self.node_count as f64
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out.offsets[v + 1] - self.out.offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inn.offsets[v + 1] - self.inn.offsets[v]
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[u32] {
        self.out.row(v)
    }

    /// In-neighbors of `v` by ascending id.
    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[u32] {
        self.inn.row(v)
    }

    /// In-neighbors of `v` by non-decreasing out-degree, ties by id.
    #[inline]
    pub fn in_neighbors_sorted(&self, v: NodeId) -> &[u32] {
        self.in_sorted.row(v)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count && self.out_sorted.row(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges in out-list order, node by node.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count)
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v as NodeId)))
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.node_count).map(|v| self.out_degree(v)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.node_count).map(|v| self.in_degree(v)).collect()
    }

    /// Writes the edge list with an `n m` header line.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.node_count, self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Reads an edge list: one `u v` pair per line, `#`/`%` comments and blank
    /// lines ignored.
    ///
    /// A first line `n m` is taken as a header when exactly `m` edge lines
    /// follow it and every id is below `n`; otherwise it is an ordinary edge
    /// and `n` is one past the largest id seen.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| Error::InstanceLoad(format!("line {}: expected two ids", lineno + 1)))?
                    .parse::<usize>()
                    .map_err(|e| Error::InstanceLoad(format!("line {}: {e}", lineno + 1)))
            };
            let a = parse(it.next())?;
            let b = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::InstanceLoad(format!("line {}: trailing tokens", lineno + 1)));
            }
            pairs.push((a, b));
        }
        if pairs.is_empty() {
            return Err(Error::InstanceLoad("empty edge list".into()));
        }
        let (n0, m0) = pairs[0];
        let rest = &pairs[1..];
        let header = rest.len() == m0
            && n0 > 0
            && rest.iter().all(|&(u, v)| u < n0 && v < n0);
        if header {
            Self::build(rest, n0)
        } else {
            let n = pairs.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
            Self::build(&pairs, n)
        }
    }
}
