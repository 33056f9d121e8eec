//! Baseline estimators: Monte Carlo walks, backward push, their bidirectional
//! combination, synchronous power iteration, randomized backward search, and
//! the `JUMP`-based single-target methods.

mod bippr;
mod jump;
mod monte_carlo;
mod power;
mod push;
mod rbs;
mod walk;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use bippr::bippr_pair;
pub use jump::{single_target_bidir_jump, single_target_jump_mc, JumpTargetEstimate};
pub use monte_carlo::{monte_carlo_pair, single_source_mc};
pub use power::{power_iteration_source, power_iteration_target};
pub use push::{approx_contributions, approx_contributions_observed, push_back, PushFrontier};
pub use rbs::{rbs_default_levels, rbs_default_theta, rbs_single_target};
pub use walk::{sample_walk, WalkRecord};

/// Default multiplier of `ln(2/p_f)/(ε²δ)` in walk counts. Three is the
/// Chernoff constant: for a mean `μ ≤ m` of `[0,1]` samples, `W` draws miss
/// it by `εm` with probability at most `2·exp(-Wε²m/3)`.
pub const DEFAULT_WALK_CONSTANT: f64 = 3.0;

/// Accuracy parameters shared by the classic estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgoParams {
    pub alpha: f64,
    pub delta: f64,
    pub eps: f64,
    pub p_f: f64,
    #[serde(default = "default_walk_constant")]
    pub walk_constant: f64,
}

fn default_walk_constant() -> f64 {
    DEFAULT_WALK_CONSTANT
}

impl AlgoParams {
    pub fn new(alpha: f64, delta: f64, eps: f64, p_f: f64) -> Result<Self> {
        let p = Self { alpha, delta, eps, p_f, walk_constant: DEFAULT_WALK_CONSTANT };
        p.validate()?;
        Ok(p)
    }

    pub fn with_walk_constant(mut self, c: f64) -> Self {
        self.walk_constant = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let open = |name: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must lie in (0,1), got {x}")))
            }
        };
        open("alpha", self.alpha)?;
        open("eps", self.eps)?;
        open("p_f", self.p_f)?;
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0,1], got {}", self.delta)));
        }
        if !(self.walk_constant > 0.0) {
            return Err(Error::InvalidArgument("walk_constant must be positive".into()));
        }
        Ok(())
    }

    /// `⌈c·ln(2/p_f)/(ε²δ)⌉` walks for plain Monte Carlo.
    pub fn mc_walk_count(&self) -> usize {
        self.scaled_walks(1.0)
    }

    /// `⌈c·r_max·ln(2/p_f)/(ε²δ)⌉` walks once residues are below `r_max`.
    pub fn bippr_walk_count(&self, r_max: f64) -> usize {
        self.scaled_walks(r_max.min(1.0))
    }

    fn scaled_walks(&self, factor: f64) -> usize {
        let w = self.walk_constant * factor * (2.0 / self.p_f).ln() / (self.eps * self.eps * self.delta);
        (w.ceil() as usize).max(1)
    }

    /// Levels `⌈log_{1/(1-α)}(1/(εδ))⌉` after which truncation error is below `εδ`.
    pub fn truncation_levels(&self) -> usize {
        let l = (1.0 / (self.eps * self.delta)).ln() / (1.0 / (1.0 - self.alpha)).ln();
        (l.ceil() as usize).max(1)
    }

    /// Push threshold `(dδ)^{1/2}` balancing push and walk cost on average.
    pub fn balanced_r_max(&self, average_degree: f64) -> f64 {
        (average_degree * self.delta).sqrt()
    }
}

/// A single-pair estimate and how many walks it used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairEstimate {
    pub estimate: f64,
    pub walks: usize,
}
