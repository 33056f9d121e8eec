use crate::oracle::OutDegreeCache;
use crate::{Direction, Error, GraphAccess, NodeId, Result};

fn check<G: GraphAccess + ?Sized>(o: &G, v: NodeId, levels: usize) -> Result<()> {
    if v >= o.node_count() {
        return Err(Error::NodeIdOutOfRange { node: v, node_count: o.node_count() });
    }
    if levels == 0 {
        return Err(Error::InvalidArgument("power iteration needs at least one level".into()));
    }
    Ok(())
}

/// Synchronous backward iteration for `levels` rounds.
///
/// Returns `Σ_{i=0}^{L} α·r_i(s)` for every `s`, where `r_i` is the exact
/// level-`i` residue; the result equals the walk-length-truncated `π(s,t)` and
/// undershoots it by at most `(1-α)^{L+1}`.
pub fn power_iteration_target<G: GraphAccess + ?Sized>(
    o: &mut G,
    t: NodeId,
    alpha: f64,
    levels: usize,
) -> Result<Vec<f64>> {
    check(o, t, levels)?;
    let n = o.node_count();
    let mut degrees = OutDegreeCache::new();
    let mut estimate = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    cur[t] = 1.0;
    let mut active = vec![t];
    for _ in 0..levels {
        let mut next_active = Vec::new();
        for &v in &active {
            let r = cur[v];
            estimate[v] += alpha * r;
            let d_in = o.in_degree(v)?;
            for i in 0..d_in {
                let u = o.neighbor(v, i, Direction::In)?;
                let d_out = degrees.get(o, u)?;
                if next[u] == 0.0 {
                    next_active.push(u);
                }
                next[u] += (1.0 - alpha) * r / d_out as f64;
            }
            cur[v] = 0.0;
        }
        std::mem::swap(&mut cur, &mut next);
        next_active.sort_unstable();
        next_active.dedup();
        active = next_active;
    }
    for &v in &active {
        estimate[v] += alpha * cur[v];
    }
    Ok(estimate)
}

/// Forward counterpart: `Σ_{i=0}^{L} α·x_i(t)` with `x_0 = e_s`.
pub fn power_iteration_source<G: GraphAccess + ?Sized>(
    o: &mut G,
    s: NodeId,
    alpha: f64,
    levels: usize,
) -> Result<Vec<f64>> {
    check(o, s, levels)?;
    let n = o.node_count();
    let mut estimate = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    cur[s] = 1.0;
    let mut active = vec![s];
    for _ in 0..levels {
        let mut next_active = Vec::new();
        for &u in &active {
            let x = cur[u];
            estimate[u] += alpha * x;
            let d_out = o.out_degree(u)?;
            let share = (1.0 - alpha) * x / d_out as f64;
            for i in 0..d_out {
                let v = o.neighbor(u, i, Direction::Out)?;
                if next[v] == 0.0 {
                    next_active.push(v);
                }
                next[v] += share;
            }
            cur[u] = 0.0;
        }
        std::mem::swap(&mut cur, &mut next);
        next_active.sort_unstable();
        next_active.dedup();
        active = next_active;
    }
    for &v in &active {
        estimate[v] += alpha * cur[v];
    }
    Ok(estimate)
}
