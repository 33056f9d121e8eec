use rand::Rng;

use crate::oracle::OutDegreeCache;
use crate::{Capabilities, Error, GraphAccess, NodeId, Result};

/// Level count `⌈log_{1/(1-α)}(1/(εδ))⌉`.
pub fn rbs_default_levels(alpha: f64, eps: f64, delta: f64) -> usize {
    let l = (1.0 / (eps * delta)).ln() / (1.0 / (1.0 - alpha)).ln();
    (l.ceil() as usize).max(1)
}

/// Sampling granularity `ε²δ / (3·ln(2/p_f))`.
pub fn rbs_default_theta(eps: f64, delta: f64, p_f: f64) -> f64 {
    eps * eps * delta / (3.0 * (2.0 / p_f).ln())
}

/// Level-synchronous randomized backward search from `t`.
///
/// A push of residue `r` from `v` gives an in-neighbor `u` the increment
/// `χ = (1-α)·r/d_out(u)` when `χ ≥ θ`, and otherwise `θ` with probability
/// `χ/θ`. The in-list is scanned by increasing out-degree (decreasing `χ`)
/// against one uniform threshold per `(v, level)`, so a push costs only the
/// nodes it updates plus one. Returns `Σ_{i≤L} α·r_i(s)` for every `s`, an
/// unbiased estimate of the walk-length-truncated `π(s,t)`.
pub fn rbs_single_target<G, R>(
    o: &mut G,
    t: NodeId,
    alpha: f64,
    theta: f64,
    levels: usize,
    rng: &mut R,
) -> Result<Vec<f64>>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    o.require(Capabilities::BASE.with_in_sorted())?;
    let n = o.node_count();
    if t >= n {
        return Err(Error::NodeIdOutOfRange { node: t, node_count: n });
    }
    if !(theta > 0.0) || levels == 0 {
        return Err(Error::InvalidArgument("theta must be positive and levels at least 1".into()));
    }
    let mut degrees = OutDegreeCache::new();
    let mut estimate = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    cur[t] = 1.0;
    let mut active = vec![t];
    for _ in 0..levels {
        let mut next_active = Vec::new();
        for &v in &active {
            let r = std::mem::take(&mut cur[v]);
            estimate[v] += alpha * r;
            let cut = rng.random::<f64>() * theta;
            let d_in = o.in_degree(v)?;
            for i in 0..d_in {
                let u = o.in_sorted(v, i)?;
                let chi = (1.0 - alpha) * r / degrees.get(o, u)? as f64;
                let inc = if chi >= theta {
                    chi
                } else if chi >= cut {
                    theta
                } else {
                    break;
                };
                if next[u] == 0.0 {
                    next_active.push(u);
                }
                next[u] += inc;
            }
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
