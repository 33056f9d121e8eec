//! Estimation of discounted random-walk probabilities (personalized PageRank)
//! in directed graphs, where every algorithm reaches the graph through a
//! metered adjacency-list oracle.
//!
//! The crate is organised around the four problem variants:
//!
//! * single-pair `π(s,t)`: [`classic::monte_carlo_pair`], [`classic::bippr_pair`]
//!   and the leveled randomized bidirectional estimator [`bidir::single_pair_ppr`];
//! * single-source `π(s,·)`: [`classic::single_source_mc`],
//!   [`classic::power_iteration_source`];
//! * single-target `π(·,t)`: [`classic::approx_contributions`],
//!   [`classic::power_iteration_target`], [`classic::rbs_single_target`],
//!   [`classic::single_target_jump_mc`], [`classic::single_target_bidir_jump`];
//! * single-node `π(t)`: the estimators in [`single_node`].
//!
//! Ground truth comes from [`exact`], the lower-bound graph families from
//! [`instances`], and the experiment driver from [`harness`].

pub mod bidir;
pub mod classic;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod oracle;
pub mod rng;
pub mod single_node;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, NodeId};
pub use oracle::{Capabilities, Direction, GraphAccess, OracleHandle, QueryKind, QueryStats};
