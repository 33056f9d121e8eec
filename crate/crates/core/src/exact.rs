//! Ground truth by dense fixed-point iteration, plus a brute-force path-sum
//! oracle for tiny graphs.
//!
//! These functions read the graph directly; they are reference solvers, not
//! estimators, and are not metered.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{DirectedGraph, Error, NodeId, Result};

/// Largest graph [`brute_force_pair`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 64;

/// Default convergence tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorKind {
    /// `π(anchor, ·)`
    Source,
    /// `π(·, anchor)`
    Target,
    /// `π(·)`, the average over all sources
    PageRank,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PprVector {
    pub values: Vec<f64>,
    pub anchor: Option<NodeId>,
    pub kind: VectorKind,
    pub tolerance: f64,
}

impl PprVector {
    pub fn get(&self, v: NodeId) -> f64 {
        self.values[v]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Writes `node,value` rows under a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "value"])?;
        for (v, x) in self.values.iter().enumerate() {
            out.write_record([v.to_string(), format!("{x:e}")])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Iterations after which the remaining walk mass `(1-α)^K` is at most `tol`.
pub fn iterations_for(alpha: f64, tol: f64) -> usize {
    ((tol.ln() / (1.0 - alpha).ln()).ceil() as usize).max(1)
}

fn check(g: &DirectedGraph, anchor: Option<NodeId>, alpha: f64, tol: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tol must lie in (0,1), got {tol}")));
    }
    if let Some(v) = anchor {
        if v >= g.node_count() {
            return Err(Error::NodeIdOutOfRange { node: v, node_count: g.node_count() });
        }
    }
    Ok(())
}

/// Forward iteration of `x ← (1-α) x P` from `start`, accumulating `α x`.
fn forward(g: &DirectedGraph, start: Vec<f64>, alpha: f64, tol: f64) -> Vec<f64> {
    let n = g.node_count();
    let mut acc = vec![0.0; n];
    let mut x = start;
    let mut next = vec![0.0; n];
    for _ in 0..=iterations_for(alpha, tol) {
        next.iter_mut().for_each(|y| *y = 0.0);
        for u in 0..n {
            let mass = x[u];
            if mass == 0.0 {
                continue;
            }
            acc[u] += alpha * mass;
            let share = (1.0 - alpha) * mass / g.out_degree(u) as f64;
            for &v in g.out_neighbors(u) {
                next[v as usize] += share;
            }
        }
        std::mem::swap(&mut x, &mut next);
    }
    acc
}

pub fn exact_single_source(g: &DirectedGraph, s: NodeId, alpha: f64, tol: f64) -> Result<PprVector> {
    check(g, Some(s), alpha, tol)?;
    let mut start = vec![0.0; g.node_count()];
    start[s] = 1.0;
    Ok(PprVector {
        values: forward(g, start, alpha, tol),
        anchor: Some(s),
        kind: VectorKind::Source,
        tolerance: tol,
    })
}

/// `π(·,t)` via `y_{k+1}(u) = (1-α)/d_out(u) · Σ_{v ∈ N_out(u)} y_k(v)`.
pub fn exact_single_target(g: &DirectedGraph, t: NodeId, alpha: f64, tol: f64) -> Result<PprVector> {
    check(g, Some(t), alpha, tol)?;
    let n = g.node_count();
    let mut acc = vec![0.0; n];
    let mut y = vec![0.0; n];
    y[t] = 1.0;
    let mut next = vec![0.0; n];
    for _ in 0..=iterations_for(alpha, tol) {
        for u in 0..n {
            acc[u] += alpha * y[u];
        }
        for (u, slot) in next.iter_mut().enumerate() {
            let sum: f64 = g.out_neighbors(u).iter().map(|&v| y[v as usize]).sum();
            *slot = (1.0 - alpha) * sum / g.out_degree(u) as f64;
        }
        std::mem::swap(&mut y, &mut next);
    }
    Ok(PprVector { values: acc, anchor: Some(t), kind: VectorKind::Target, tolerance: tol })
}

/// PageRank `π(t) = (1/n) Σ_s π(s,t)` for every `t`.
pub fn exact_pagerank(g: &DirectedGraph, alpha: f64, tol: f64) -> Result<PprVector> {
    check(g, None, alpha, tol)?;
    let n = g.node_count();
    Ok(PprVector {
        values: forward(g, vec![1.0 / n as f64; n], alpha, tol),
        anchor: None,
        kind: VectorKind::PageRank,
        tolerance: tol,
    })
}

/// `Σ_{k=0}^{horizon} α(1-α)^k P^k[s][t]` with `P^k` formed as dense matrix
/// powers. Independent of the iterative solvers; refuses `n > 64`.
pub fn brute_force_pair(
    g: &DirectedGraph,
    s: NodeId,
    t: NodeId,
    alpha: f64,
    horizon: usize,
) -> Result<f64> {
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::ExplosionGuard(n));
    }
    check(g, Some(s), alpha, 0.5)?;
    check(g, Some(t), alpha, 0.5)?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let mut p = vec![vec![0.0; n]; n];
    for (u, v) in g.edges() {
        p[u][v] += 1.0 / g.out_degree(u) as f64;
    }
    let mut power: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mut total = 0.0;
    let mut weight = alpha;
    for k in 0..=horizon {
        total += weight * power[s][t];
        if k == horizon {
            break;
        }
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for (l, row) in p.iter().enumerate() {
                let a = power[i][l];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += a * row[j];
                }
            }
        }
        power = next;
        weight *= 1.0 - alpha;
    }
    Ok(total)
}
