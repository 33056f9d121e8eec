use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bippr::walk_average;
use super::{approx_contributions, AlgoParams, PushFrontier};
use crate::{Capabilities, Error, GraphAccess, NodeId, Result};

/// Per-source estimates of `π(·,t)` and the sampling effort behind them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpTargetEstimate {
    pub estimates: Vec<f64>,
    pub jumps: usize,
    pub walks: usize,
    pub r_max: f64,
}

/// `JUMP` until every node has been drawn, in first-draw order.
fn collect_sources<G: GraphAccess + ?Sized>(o: &mut G) -> Result<(Vec<NodeId>, usize)> {
    let n = o.node_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut jumps = 0;
    while order.len() < n {
        let v = o.jump()?;
        jumps += 1;
        if !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    }
    Ok((order, jumps))
}

fn prepare<G: GraphAccess + ?Sized>(o: &G, t: NodeId, params: &AlgoParams) -> Result<()> {
    o.require(Capabilities::BASE.with_jump())?;
    params.validate()?;
    if t >= o.node_count() {
        return Err(Error::NodeIdOutOfRange { node: t, node_count: o.node_count() });
    }
    Ok(())
}

/// Discovers sources by `JUMP` and runs plain Monte Carlo from each.
pub fn single_target_jump_mc<G, R>(o: &mut G, t: NodeId, params: &AlgoParams, rng: &mut R) -> Result<JumpTargetEstimate>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    prepare(o, t, params)?;
    let frontier = PushFrontier::new(o.node_count(), t, params.alpha, 1.0);
    sample_sources(o, &frontier, params, params.mc_walk_count(), rng)
}

/// Backward push from `t` to `r_max = (dδ/n)^{1/2}` (unless overridden), then
/// bidirectional walks from every `JUMP`-discovered source.
pub fn single_target_bidir_jump<G, R>(
    o: &mut G,
    t: NodeId,
    params: &AlgoParams,
    r_max: Option<f64>,
    rng: &mut R,
) -> Result<JumpTargetEstimate>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    prepare(o, t, params)?;
    let n = o.node_count() as f64;
    let d = o.edge_count() as f64 / n;
    let r_max = r_max.unwrap_or_else(|| (d * params.delta / n).sqrt());
    if !(r_max > 0.0) {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    let frontier = if r_max >= 1.0 {
        PushFrontier::new(o.node_count(), t, params.alpha, r_max)
    } else {
        approx_contributions(o, t, params.alpha, r_max)?
    };
    sample_sources(o, &frontier, params, params.bippr_walk_count(r_max), rng)
}

fn sample_sources<G, R>(
    o: &mut G,
    frontier: &PushFrontier,
    params: &AlgoParams,
    walks_per_source: usize,
    rng: &mut R,
) -> Result<JumpTargetEstimate>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    let (sources, jumps) = collect_sources(o)?;
    let mut estimates = frontier.reserve.clone();
    for s in sources {
        estimates[s] += walk_average(o, s, frontier, params.alpha, walks_per_source, rng)?;
    }
    Ok(JumpTargetEstimate {
        estimates,
        jumps,
        walks: walks_per_source * o.node_count(),
        r_max: frontier.r_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DirectedGraph, OracleHandle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singleton_and_gating() {
        let g = DirectedGraph::build(&[(0, 0)], 1).unwrap();
        let p = AlgoParams::new(0.2, 0.5, 0.2, 0.1).unwrap();
        let mut o = OracleHandle::full(&g, 1);
        let est = single_target_jump_mc(&mut o, 0, &p, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(est.estimates, vec![1.0]);
        assert_eq!(est.jumps, 1);

        let mut base = OracleHandle::new(&g, Capabilities::BASE, 1);
        assert!(matches!(
            single_target_bidir_jump(&mut base, 0, &p, None, &mut ChaCha8Rng::seed_from_u64(0)),
            Err(Error::CapabilityDisabled(_))
        ));
    }

    #[test]
    fn chain_coupon_collector() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let p = AlgoParams::new(0.2, 0.1, 0.1, 0.1).unwrap();
        let mut total_jumps = 0;
        for seed in 0..200 {
            let mut o = OracleHandle::full(&g, seed);
            let est = single_target_jump_mc(&mut o, 1, &p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            total_jumps += est.jumps;
            assert_eq!(est.estimates[1], 1.0);
        }
        // expected 2·H_2 = 3 jumps
        assert!((total_jumps as f64 / 200.0 - 3.0).abs() < 0.5);
    }

    #[test]
    fn degenerate_r_max_skips_push() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let p = AlgoParams::new(0.2, 0.1, 0.1, 0.1).unwrap();
        let mut o = OracleHandle::full(&g, 5);
        let est = single_target_bidir_jump(&mut o, 1, &p, Some(1.5), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(o.stats().in_, 0);
        assert!((est.estimates[0] - 0.8).abs() < 0.08);
        assert!((est.estimates[1] - 1.0).abs() < 0.1);
    }
}
