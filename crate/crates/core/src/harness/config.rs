use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bidir::Multipliers;
use crate::instances::{Family, InstanceSpec, Padding, SwapSpec};
use crate::{Capabilities, Error, NodeId, Result};

/// Which quantity an estimator produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemVariant {
    Pair,
    Source,
    Target,
    Node,
}

macro_rules! algorithms {
    ($($variant:ident => $name:literal, $problem:ident, $caps:expr;)*) => {
        /// Estimators the harness can drive.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum Algorithm {
            $($variant,)*
        }

        impl Algorithm {
            pub const ALL: &'static [Algorithm] = &[$(Algorithm::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Algorithm::$variant => $name,)*
                }
            }

            pub fn problem(self) -> ProblemVariant {
                match self {
                    $(Algorithm::$variant => ProblemVariant::$problem,)*
                }
            }

            /// Optional queries the estimator needs.
            pub fn requires(self) -> Capabilities {
                match self {
                    $(Algorithm::$variant => $caps,)*
                }
            }
        }
    };
}

algorithms! {
    MonteCarlo => "monte_carlo", Pair, Capabilities::BASE;
    Bippr => "bippr", Pair, Capabilities::BASE;
    SinglePairPpr => "single_pair_ppr", Pair, Capabilities::BASE.with_in_sorted().with_adj();
    SingleSourceMc => "single_source_mc", Source, Capabilities::BASE;
    PowerIterationSource => "power_iteration_source", Source, Capabilities::BASE;
    ApproxContributions => "approx_contributions", Target, Capabilities::BASE;
    PowerIterationTarget => "power_iteration_target", Target, Capabilities::BASE;
    Rbs => "rbs", Target, Capabilities::BASE.with_in_sorted();
    JumpMc => "jump_mc", Target, Capabilities::BASE.with_jump();
    BidirJump => "bidir_jump", Target, Capabilities::BASE.with_jump();
    SingleNodeAdaptive => "single_node_adaptive", Node, Capabilities::BASE.with_in_sorted();
    SingleNodeAvgJump => "single_node_avg_jump", Node, Capabilities::BASE.with_jump();
    SingleNodeAvgFull => "single_node_avg_full", Node, Capabilities::ALL;
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    /// Edge-list file.
    File { path: PathBuf },
    /// One generated instance shared by every cell.
    Generator { spec: InstanceSpec },
    /// A family instance re-derived for each cell's `δ`.
    Preset {
        family: Family,
        n: usize,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        swap: Option<SwapSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        padding: Option<Padding>,
    },
    /// Uniform random digraph.
    Random { n: usize, m: usize, seed: u64 },
}

/// How a trial picks its source or target.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeSelect {
    /// The instance's designated node.
    #[default]
    Designated,
    Node(NodeId),
    /// Uniform over all nodes, drawn per trial.
    Uniform,
    /// Uniform over a named role, drawn per trial.
    Role(String),
}

fn default_cap() -> usize {
    super::EXACT_CAP
}

fn default_trials() -> usize {
    1
}

/// One experiment: an estimator, an instance, a `δ` sweep and a trial count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    /// Checked against the algorithm when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemVariant>,
    pub instance: InstanceSource,
    #[serde(default = "all_caps")]
    pub capabilities: Capabilities,
    pub deltas: Vec<f64>,
    pub eps: f64,
    pub p_f: f64,
    pub alpha: f64,
    #[serde(default)]
    pub multipliers: Multipliers,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk_constant: Option<f64>,
    /// Push threshold override for the push-based estimators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub source: NodeSelect,
    #[serde(default)]
    pub target: NodeSelect,
    /// Largest graph for which exact values are computed.
    #[serde(default = "default_cap")]
    pub exact_cap: usize,
}

fn all_caps() -> Capabilities {
    Capabilities::ALL
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, instance: InstanceSource, deltas: Vec<f64>) -> Self {
        Self {
            algorithm,
            problem: None,
            instance,
            capabilities: Capabilities::ALL,
            deltas,
            eps: 0.2,
            p_f: 0.1,
            alpha: 0.2,
            multipliers: Multipliers::default(),
            walk_constant: None,
            r_max: None,
            trials: 1,
            seed: 0,
            source: NodeSelect::Designated,
            target: NodeSelect::Designated,
            exact_cap: default_cap(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.deltas.is_empty() {
            return Err(Error::InvalidArgument("at least one delta is required".into()));
        }
        if let Some(&bad) = self.deltas.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0,1], got {bad}")));
        }
        for (name, x) in [("eps", self.eps), ("p_f", self.p_f), ("alpha", self.alpha)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidArgument(format!("{name} must lie in (0,1), got {x}")));
            }
        }
        if let Some(p) = self.problem {
            if p != self.algorithm.problem() {
                return Err(Error::InvalidArgument(format!(
                    "{} solves {:?}, not {p:?}",
                    self.algorithm,
                    self.algorithm.problem()
                )));
            }
        }
        let need = self.algorithm.requires();
        if !self.capabilities.covers(&need) {
            let missing = [("jump", need.jump, self.capabilities.jump), ("in_sorted", need.in_sorted, self.capabilities.in_sorted), ("adj", need.adj, self.capabilities.adj)]
                .iter()
                .filter(|(_, want, have)| *want && !*have)
                .map(|(name, _, _)| *name)
                .collect::<Vec<_>>()
                .join(",");
            return Err(Error::CapabilityMismatch { algorithm: self.algorithm.name().to_string(), missing });
        }
        Ok(())
    }
}
