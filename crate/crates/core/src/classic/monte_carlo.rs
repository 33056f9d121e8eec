use rand::Rng;

use super::{sample_walk, AlgoParams, PairEstimate};
use crate::{Error, GraphAccess, NodeId, Result};

fn check<G: GraphAccess + ?Sized>(o: &G, nodes: &[NodeId]) -> Result<()> {
    for &v in nodes {
        if v >= o.node_count() {
            return Err(Error::NodeIdOutOfRange { node: v, node_count: o.node_count() });
        }
    }
    Ok(())
}

/// Fraction of `⌈c·ln(2/p_f)/(ε²δ)⌉` walks from `s` that stop at `t`.
pub fn monte_carlo_pair<G, R>(
    o: &mut G,
    s: NodeId,
    t: NodeId,
    params: &AlgoParams,
    rng: &mut R,
) -> Result<PairEstimate>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    check(o, &[s, t])?;
    let walks = params.mc_walk_count();
    let mut hits = 0usize;
    for _ in 0..walks {
        hits += usize::from(sample_walk(o, s, params.alpha, rng)?.terminal == t);
    }
    Ok(PairEstimate { estimate: hits as f64 / walks as f64, walks })
}

/// Terminal frequencies of the same number of walks, as an estimate of `π(s,·)`.
pub fn single_source_mc<G, R>(o: &mut G, s: NodeId, params: &AlgoParams, rng: &mut R) -> Result<Vec<f64>>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    check(o, &[s])?;
    let walks = params.mc_walk_count();
    let mut freq = vec![0.0; o.node_count()];
    let w = 1.0 / walks as f64;
    for _ in 0..walks {
        freq[sample_walk(o, s, params.alpha, rng)?.terminal] += w;
    }
    Ok(freq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Capabilities, DirectedGraph, OracleHandle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singleton_is_exact() {
        let g = DirectedGraph::build(&[(0, 0)], 1).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let p = AlgoParams::new(0.2, 0.5, 0.2, 0.1).unwrap();
        let est = monte_carlo_pair(&mut o, 0, 0, &p, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.walks, p.mc_walk_count());
    }

    #[test]
    fn chain_single_source_sums_to_one() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let p = AlgoParams::new(0.2, 0.1, 0.1, 0.1).unwrap();
        let v = single_source_mc(&mut o, 0, &p, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!((v[1] - 0.8).abs() < 0.08);
    }
}
