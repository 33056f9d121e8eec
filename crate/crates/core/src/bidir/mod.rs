//! Leveled randomized bidirectional estimator for a single pair `π(s,t)`.
//!
//! A backward phase pushes residue from `t` level by level, sampling small
//! increments instead of touching every in-neighbor. A forward phase then
//! runs `n_r` walks from `s` and, at each terminal `u`, estimates the
//! residue mass `R(u)` still owed to `u` by checking edges into a small heavy
//! set directly and sampling the rest of `N_out(u)`.

mod params;
mod state;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classic::sample_walk;
use crate::{Capabilities, Error, GraphAccess, NodeId, QueryStats, Result};

pub use params::{
    check_constraints, derive_params, derive_params_with_report, ConstraintCheck, ConstraintReport, LevelSchedule,
    Multipliers, NewAlgoParams,
};
pub use state::{backward_phase, compute_r, estimate_r_hat, rand_push_threshold, RandPushState};

/// What a run did, for logging and inspection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub levels: usize,
    pub theta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub theta_floor: f64,
    pub n_r: usize,
    pub n_s: usize,
    pub tau: f64,
    pub pushes_per_level: Vec<usize>,
    pub heavy_count: usize,
    pub source_reserve: f64,
    pub backward_queries: QueryStats,
    pub forward_queries: QueryStats,
}

impl Diagnostics {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidirEstimate {
    pub estimate: f64,
    pub diagnostics: Diagnostics,
}

/// `π̂(s,t) = p̂(s) + (1/n_r) Σ_k R̂(u_k)` over the terminals `u_k` of `n_r`
/// walks from `s`. Every terminal gets its own independent `R̂`, repeated
/// terminals included.
pub fn single_pair_ppr<G, R>(
    o: &mut G,
    s: NodeId,
    t: NodeId,
    params: &NewAlgoParams,
    rng: &mut R,
) -> Result<BidirEstimate>
where
    G: GraphAccess + ?Sized,
    R: Rng + ?Sized,
{
    o.require(Capabilities::BASE.with_in_sorted().with_adj())?;
    let n = o.node_count();
    for v in [s, t] {
        if v >= n {
            return Err(Error::NodeIdOutOfRange { node: v, node_count: n });
        }
    }
    if params.n_r == 0 || params.n_s == 0 {
        return Err(Error::InvalidArgument("n_r and n_s must be positive".into()));
    }
    let start = o.stats();
    let mut state = backward_phase(o, t, params.alpha, &params.schedule, rng)?;
    state.mark_heavy(params.tau);
    let mid = o.stats();

    let mut sum = 0.0;
    for _ in 0..params.n_r {
        let u = sample_walk(o, s, params.alpha, rng)?.terminal;
        sum += estimate_r_hat(o, &mut state, u, params.n_s, rng)?;
    }
    let source_reserve = state.reserve(s);
    let schedule = &params.schedule;
    Ok(BidirEstimate {
        estimate: source_reserve + sum / params.n_r as f64,
        diagnostics: Diagnostics {
            levels: schedule.levels,
            theta: schedule.theta.clone(),
            gamma: schedule.gamma.clone(),
            theta_floor: schedule.theta_floor(),
            n_r: params.n_r,
            n_s: params.n_s,
            tau: params.tau,
            pushes_per_level: state.push_counts().to_vec(),
            heavy_count: state.heavy().len(),
            source_reserve,
            backward_queries: mid.since(&start),
            forward_queries: o.stats().since(&mid),
        },
    })
}
