use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::{NodeId, Result};

/// A named contiguous block of node ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Role {
    pub name: String,
    pub start: NodeId,
    pub len: usize,
}

impl Role {
    pub fn range(&self) -> Range<NodeId> {
        self.start..self.start + self.len
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.range().contains(&v)
    }
}

/// Allocates roles in order and collects edges.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    pub roles: Vec<Role>,
    pub edges: Vec<(NodeId, NodeId)>,
    next: NodeId,
}

impl Builder {
    pub fn set(&mut self, name: &str, len: usize) -> Range<NodeId> {
        let start = self.next;
        self.next += len;
        self.roles.push(Role { name: name.to_string(), start, len });
        start..self.next
    }

    pub fn node(&mut self, name: &str) -> NodeId {
        self.set(name, 1).start
    }

    pub fn node_count(&self) -> usize {
        self.next
    }

    pub fn edge(&mut self, u: NodeId, v: NodeId) {
        self.edges.push((u, v));
    }

    pub fn self_loops(&mut self, set: Range<NodeId>) {
        for v in set {
            self.edges.push((v, v));
        }
    }

    pub fn all_to(&mut self, set: Range<NodeId>, v: NodeId) -> Vec<(NodeId, NodeId)> {
        let added: Vec<_> = set.map(|u| (u, v)).collect();
        self.edges.extend_from_slice(&added);
        added
    }

    pub fn complete(&mut self, from: Range<NodeId>, to: Range<NodeId>) -> Vec<(NodeId, NodeId)> {
        let added: Vec<_> = from.flat_map(|u| to.clone().map(move |v| (u, v))).collect();
        self.edges.extend_from_slice(&added);
        added
    }

    /// `deg`-regular wiring between equal-size sets with
    /// `N_in(to[i]) = {from[i], …, from[(i+deg-1) mod n]}`.
    pub fn circulant(&mut self, from: Range<NodeId>, to: Range<NodeId>, deg: usize) -> Vec<(NodeId, NodeId)> {
        let n = from.len();
        debug_assert_eq!(n, to.len());
        let mut added = Vec::with_capacity(n * deg);
        for j in 0..n {
            for k in 0..deg {
                added.push((from.start + j, to.start + (j + n - k) % n));
            }
        }
        self.edges.extend_from_slice(&added);
        added
    }

    /// `V_g → x_g → W_g` for consecutive groups of `size` nodes.
    pub fn grouped(&mut self, v: Range<NodeId>, x: Range<NodeId>, w: Range<NodeId>, size: usize) {
        let n = v.len();
        for i in 0..n {
            self.edges.push((v.start + i, x.start + i / size));
        }
        for g in 0..x.len() {
            for i in g * size..((g + 1) * size).min(n) {
                self.edges.push((x.start + g, w.start + i));
            }
        }
        self.self_loops(w);
    }

    /// Replaces `(u1,v1)` and `(u2,v2)` by `(u1,v2)` and `(u2,v1)`.
    pub fn swap(&mut self, e1: (NodeId, NodeId), e2: (NodeId, NodeId)) -> Result<()> {
        self.replace(e1, (e1.0, e2.1))?;
        self.replace(e2, (e2.0, e1.1))
    }

    pub fn replace(&mut self, old: (NodeId, NodeId), new: (NodeId, NodeId)) -> Result<()> {
        let slot = self
            .edges
            .iter_mut()
            .find(|e| **e == old)
            .ok_or_else(|| crate::Error::SpecConstraintViolation(format!("edge {old:?} is not in the graph")))?;
        *slot = new;
        Ok(())
    }

    /// Disconnected block of `nodes` nodes carrying `edges` edges: node `i`
    /// links to `i, i+1, …` (mod `nodes`), with the remainder spread over the
    /// first nodes.
    pub fn padding(&mut self, nodes: usize, edges: usize) {
        let block = self.set("padding", nodes);
        let (base, extra) = (edges / nodes, edges % nodes);
        for i in 0..nodes {
            let deg = base + usize::from(i < extra);
            for j in 0..deg {
                self.edges.push((block.start + i, block.start + (i + j) % nodes));
            }
        }
    }
}
