use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{GraphAccess, NodeId, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub start: NodeId,
    pub terminal: NodeId,
    /// Number of edges traversed.
    pub length: usize,
}

/// One α-discounted walk from `s`: stop with probability α, otherwise move to a
/// uniform out-neighbor. Each step costs one `DEG-OUT` and one `OUT` query.
///
/// The length is drawn up front as a geometric variable, which saves one
/// random draw per step.
pub fn sample_walk<G, R>(o: &mut G, s: NodeId, alpha: f64, rng: &mut R) -> Result<WalkRecord>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    walk_with_log_keep(o, s, (1.0 - alpha).ln(), rng)
}

/// [`sample_walk`] with `ln(1−α)` precomputed, for loops over many walks.
pub(crate) fn walk_with_log_keep<G, R>(o: &mut G, s: NodeId, log_keep: f64, rng: &mut R) -> Result<WalkRecord>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    let length = geometric_length(log_keep, rng);
    let mut cur = s;
    for _ in 0..length {
        cur = o.random_out_neighbor(cur, rng)?;
    }
    Ok(WalkRecord { start: s, terminal: cur, length })
}

/// `P(length ≥ k) = (1−α)^k`, by inverting the tail at a uniform in (0, 1].
/// Takes `ln(1−α)`, which is `-∞` when `α = 1`.
#[inline]
fn geometric_length<R: Rng + ?Sized>(log_keep: f64, rng: &mut R) -> usize {
    if log_keep == f64::NEG_INFINITY {
        return 0;
    }
    let u = 1.0 - rng.random::<f64>();
    (u.ln() / log_keep).floor() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Capabilities, DirectedGraph, OracleHandle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singleton_walk_stays() {
        let g = DirectedGraph::build(&[(0, 0)], 1).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_walk(&mut o, 0, 0.2, &mut rng).unwrap().terminal, 0);
        }
    }

    #[test]
    fn chain_terminal_law_and_cost() {
        let g = DirectedGraph::build(&[(0, 1), (1, 1)], 2).unwrap();
        let mut o = OracleHandle::new(&g, Capabilities::BASE, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let mut at_t = 0usize;
        let mut steps = 0usize;
        for _ in 0..n {
            let w = sample_walk(&mut o, 0, 0.2, &mut rng).unwrap();
            at_t += usize::from(w.terminal == 1);
            steps += w.length;
        }
        let p = at_t as f64 / n as f64;
        let sd = (0.8 * 0.2 / n as f64).sqrt();
        assert!((p - 0.8).abs() < 4.0 * sd, "p = {p}");
        // step count is geometric with mean (1-α)/α = 4 and variance (1-α)/α² = 20
        let mean = steps as f64 / n as f64;
        assert!((mean - 4.0).abs() < 4.0 * (20.0 / n as f64).sqrt(), "mean = {mean}");
        assert_eq!(o.stats().total, 2 * steps as u64);
    }

    #[test]
    fn geometric_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let lens: Vec<usize> = (0..n).map(|_| geometric_length(0.7f64.ln(), &mut rng)).collect();
        for k in [1, 3, 6] {
            let p = lens.iter().filter(|&&l| l >= k).count() as f64 / n as f64;
            let want = 0.7f64.powi(k as i32);
            assert!((p - want).abs() < 4.0 * (want * (1.0 - want) / n as f64).sqrt(), "k = {k}: {p} vs {want}");
        }
        assert_eq!(geometric_length(0f64.ln(), &mut rng), 0);
    }
}
