use std::collections::HashSet;

use rand::Rng;

use crate::rng::stream;
use crate::{DirectedGraph, Error, NodeId, Result};

/// Uniformly wired random digraph with exactly `m` distinct edges and no
/// dangling node: every node first gets one random out-edge (self-loops
/// allowed), then further edges are drawn uniformly until `m` are present.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<DirectedGraph> {
    if n == 0 || m < n || (m as u128) > (n as u128) * (n as u128) {
        return Err(Error::InvalidArgument(format!("need 1 <= n <= m <= n^2, got n = {n}, m = {m}")));
    }
    let mut rng = stream(seed, &[n as u64, m as u64]);
    let mut seen = HashSet::with_capacity(m);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    for u in 0..n {
        let v = rng.random_range(0..n);
        seen.insert((u, v));
        edges.push((u, v));
    }
    while edges.len() < m {
        let e = (rng.random_range(0..n), rng.random_range(0..n));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    DirectedGraph::build(&edges, n)
}
