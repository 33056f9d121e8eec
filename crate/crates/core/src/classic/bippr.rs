use rand::Rng;

use super::walk::walk_with_log_keep;
use super::{approx_contributions, AlgoParams, PairEstimate, PushFrontier};
use crate::{Error, GraphAccess, NodeId, Result};

/// Backward push to `r_max`, then `⌈c·r_max·ln(2/p_f)/(ε²δ)⌉` walks from `s`,
/// each adding the residue at its terminal:
/// `π̂(s,t) = p(s) + (1/n_w) Σ_k r(u_k)`.
///
/// With `r_max ≥ 1` the push phase is skipped and this is plain Monte Carlo.
pub fn bippr_pair<G, R>(
    o: &mut G,
    s: NodeId,
    t: NodeId,
    params: &AlgoParams,
    r_max: f64,
    rng: &mut R,
) -> Result<PairEstimate>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    if !(r_max > 0.0) {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    let n = o.node_count();
    for v in [s, t] {
        if v >= n {
            return Err(Error::NodeIdOutOfRange { node: v, node_count: n });
        }
    }
    let frontier = if r_max >= 1.0 {
        PushFrontier::new(n, t, params.alpha, r_max)
    } else {
        approx_contributions(o, t, params.alpha, r_max)?
    };
    let walks = params.bippr_walk_count(r_max);
    Ok(PairEstimate {
        estimate: frontier.reserve[s] + walk_average(o, s, &frontier, params.alpha, walks, rng)?,
        walks,
    })
}

/// Mean residue at the terminals of `walks` walks from `s`.
pub(crate) fn walk_average<G, R>(
    o: &mut G,
    s: NodeId,
    frontier: &PushFrontier,
    alpha: f64,
    walks: usize,
    rng: &mut R,
) -> Result<f64>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    let log_keep = (1.0 - alpha).ln();
    let mut sum = 0.0;
    for _ in 0..walks {
        sum += frontier.residue[walk_with_log_keep(o, s, log_keep, rng)?.terminal];
    }
    Ok(sum / walks as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Capabilities, DirectedGraph, OracleHandle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn large_r_max_is_monte_carlo() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let p = AlgoParams::new(0.2, 0.1, 0.1, 0.1).unwrap();
        let est = bippr_pair(&mut o, 0, 1, &p, 2.0, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(est.walks, p.mc_walk_count());
        assert_eq!(o.stats().in_, 0);
        assert!((est.estimate - 0.8).abs() < 0.08);
    }

    #[test]
    fn chain_with_push() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let p = AlgoParams::new(0.2, 0.1, 0.1, 0.1).unwrap();
        let mut ok = 0;
        for seed in 0..50 {
            let mut o = OracleHandle::new(&g, Capabilities::BASE, seed);
            let est = bippr_pair(&mut o, 0, 1, &p, 0.5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            ok += usize::from((est.estimate - 0.8).abs() < 0.08);
        }
        assert!(ok >= 45);
    }
}
