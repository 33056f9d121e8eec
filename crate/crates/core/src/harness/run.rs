use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, ExperimentConfig, InstanceSource, NodeSelect, ProblemVariant};
use crate::bidir::{derive_params, single_pair_ppr};
use crate::classic::{self, AlgoParams};
use crate::exact::{exact_pagerank, exact_single_source, PprVector, DEFAULT_TOL};
use crate::instances::{generate, parameter_presets, random_graph, InstanceMeta};
use crate::rng::{stream, trial_seeds};
use crate::single_node;
use crate::{DirectedGraph, Error, GraphAccess, NodeId, OracleHandle, QueryStats, Result};

/// One `(cell, trial)` outcome.
///
/// `estimate` is the output at the evaluated node: the pair value, the
/// target's entry of a source vector, the source's entry of a target vector,
/// or `π(t)`. `outputs` counts nonzero entries of vector outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub algorithm: Algorithm,
    pub cell: usize,
    pub delta: f64,
    pub eps: f64,
    pub p_f: f64,
    pub alpha: f64,
    pub trial: usize,
    pub source: Option<NodeId>,
    pub target: NodeId,
    pub estimate: f64,
    pub exact: Option<f64>,
    pub abs_error: Option<f64>,
    pub rel_error: Option<f64>,
    pub success: Option<bool>,
    pub outputs: usize,
    pub queries: QueryStats,
    #[serde(default)]
    pub wall_ms: f64,
}

/// `|π̂ - π| < ε·max(π, δ)` for pair-type problems and `|π̂ - π| < ε·π` for
/// the single-node problem.
pub fn is_success(problem: ProblemVariant, estimate: f64, exact: f64, eps: f64, delta: f64) -> bool {
    let scale = match problem {
        ProblemVariant::Node => exact,
        _ => exact.max(delta),
    };
    (estimate - exact).abs() < eps * scale
}

/// One cell of the sweep with its graph and lazily computed exact values.
struct Cell {
    delta: f64,
    graph: Arc<DirectedGraph>,
    meta: Option<Arc<InstanceMeta>>,
    exact_from: Mutex<HashMap<NodeId, Arc<PprVector>>>,
    pagerank: OnceLock<Arc<PprVector>>,
}

fn load_file(path: &std::path::Path) -> Result<DirectedGraph> {
    let f = File::open(path).map_err(|e| Error::InstanceLoad(format!("{}: {e}", path.display())))?;
    DirectedGraph::read_edge_list(BufReader::new(f))
        .map_err(|e| Error::InstanceLoad(format!("{}: {e}", path.display())))
}

fn build_cells(cfg: &ExperimentConfig) -> Result<Vec<Cell>> {
    let shared = match &cfg.instance {
        InstanceSource::File { path } => Some((Arc::new(load_file(path)?), None)),
        InstanceSource::Generator { spec } => {
            let (g, meta) = generate(spec)?;
            Some((Arc::new(g), Some(Arc::new(meta))))
        }
        InstanceSource::Random { n, m, seed } => Some((Arc::new(random_graph(*n, *m, *seed)?), None)),
        InstanceSource::Preset { .. } => None,
    };
    cfg.deltas
        .iter()
        .map(|&delta| {
            let (graph, meta) = match (&shared, &cfg.instance) {
                (Some((g, m)), _) => (g.clone(), m.clone()),
                (None, InstanceSource::Preset { family, n, m, swap, padding }) => {
                    let mut spec = parameter_presets(*family, *n, *m, delta, cfg.alpha)?;
                    spec.swap = *swap;
                    spec.padding = *padding;
                    let (g, meta) = generate(&spec)?;
                    (Arc::new(g), Some(Arc::new(meta)))
                }
                (None, _) => unreachable!("only presets are built per cell"),
            };
            Ok(Cell {
                delta,
                graph,
                meta,
                exact_from: Mutex::new(HashMap::new()),
                pagerank: OnceLock::new(),
            })
        })
        .collect()
}

fn select(
    how: &NodeSelect,
    designated: Option<NodeId>,
    meta: Option<&InstanceMeta>,
    n: usize,
    rng: &mut ChaCha8Rng,
    what: &str,
) -> Result<NodeId> {
    let v = match how {
        NodeSelect::Designated => designated
            .ok_or_else(|| Error::InvalidArgument(format!("instance has no designated {what}")))?,
        NodeSelect::Node(v) => *v,
        NodeSelect::Uniform => rng.random_range(0..n),
        NodeSelect::Role(name) => {
            let role = meta
                .and_then(|m| m.role(name))
                .ok_or_else(|| Error::InvalidArgument(format!("unknown role {name:?}")))?;
            if role.len == 0 {
                return Err(Error::InvalidArgument(format!("role {name:?} is empty")));
            }
            role.start + rng.random_range(0..role.len)
        }
    };
    if v >= n {
        return Err(Error::NodeIdOutOfRange { node: v, node_count: n });
    }
    Ok(v)
}

impl Cell {
    fn exact_pair(&self, s: NodeId, alpha: f64) -> Result<Arc<PprVector>> {
        if let Some(v) = self.exact_from.lock().expect("poisoned").get(&s) {
            return Ok(v.clone());
        }
        let v = Arc::new(exact_single_source(&self.graph, s, alpha, DEFAULT_TOL)?);
        self.exact_from.lock().expect("poisoned").insert(s, v.clone());
        Ok(v)
    }

    fn exact_node(&self, alpha: f64) -> Result<Arc<PprVector>> {
        if let Some(v) = self.pagerank.get() {
            return Ok(v.clone());
        }
        let v = Arc::new(exact_pagerank(&self.graph, alpha, DEFAULT_TOL)?);
        Ok(self.pagerank.get_or_init(|| v).clone())
    }
}

fn count_nonzero(v: &[f64]) -> usize {
    v.iter().filter(|&&x| x != 0.0).count()
}

fn run_trial(cfg: &ExperimentConfig, cell_index: usize, cell: &Cell, trial: usize) -> Result<TrialResult> {
    let g = &*cell.graph;
    let n = g.node_count();
    let meta = cell.meta.as_deref();
    let problem = cfg.algorithm.problem();
    let mut pick_rng = stream(cfg.seed, &[cell_index as u64, trial as u64, 2]);
    let source = if problem == ProblemVariant::Node {
        None
    } else {
        Some(select(&cfg.source, meta.and_then(|m| m.source), meta, n, &mut pick_rng, "source")?)
    };
    let target = select(&cfg.target, meta.map(|m| m.target), meta, n, &mut pick_rng, "target")?;

    let (algo_seed, jump_seed) = trial_seeds(cfg.seed, cell_index as u64, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(algo_seed);
    let mut o = OracleHandle::new(g, cfg.capabilities, jump_seed);
    let delta = cell.delta;
    let mut params = AlgoParams::new(cfg.alpha, delta, cfg.eps, cfg.p_f)?;
    if let Some(c) = cfg.walk_constant {
        params = params.with_walk_constant(c);
    }
    let s = source.unwrap_or(0);
    let t = target;
    let r_max = cfg.r_max;

    let started = Instant::now();
    let (estimate, outputs) = match cfg.algorithm {
        Algorithm::MonteCarlo => (classic::monte_carlo_pair(&mut o, s, t, &params, &mut rng)?.estimate, 1),
        Algorithm::Bippr => {
            let r = r_max.unwrap_or_else(|| params.balanced_r_max(g.average_degree()));
            (classic::bippr_pair(&mut o, s, t, &params, r, &mut rng)?.estimate, 1)
        }
        Algorithm::SinglePairPpr => {
            let p = derive_params(cfg.alpha, delta, cfg.eps, cfg.p_f, n, cfg.multipliers)?;
            (single_pair_ppr(&mut o, s, t, &p, &mut rng)?.estimate, 1)
        }
        Algorithm::SingleSourceMc => {
            let v = classic::single_source_mc(&mut o, s, &params, &mut rng)?;
            (v[t], count_nonzero(&v))
        }
        Algorithm::PowerIterationSource => {
            let v = classic::power_iteration_source(&mut o, s, cfg.alpha, params.truncation_levels())?;
            (v[t], count_nonzero(&v))
        }
        Algorithm::ApproxContributions => {
            let f = classic::approx_contributions(&mut o, t, cfg.alpha, r_max.unwrap_or(cfg.eps * delta))?;
            (f.reserve[s], count_nonzero(&f.reserve))
        }
        Algorithm::PowerIterationTarget => {
            let v = classic::power_iteration_target(&mut o, t, cfg.alpha, params.truncation_levels())?;
            (v[s], count_nonzero(&v))
        }
        Algorithm::Rbs => {
            let theta = classic::rbs_default_theta(cfg.eps, delta, cfg.p_f);
            let levels = classic::rbs_default_levels(cfg.alpha, cfg.eps, delta);
            let v = classic::rbs_single_target(&mut o, t, cfg.alpha, theta, levels, &mut rng)?;
            (v[s], count_nonzero(&v))
        }
        Algorithm::JumpMc => {
            let v = classic::single_target_jump_mc(&mut o, t, &params, &mut rng)?.estimates;
            (v[s], count_nonzero(&v))
        }
        Algorithm::BidirJump => {
            let v = classic::single_target_bidir_jump(&mut o, t, &params, r_max, &mut rng)?.estimates;
            (v[s], count_nonzero(&v))
        }
        Algorithm::SingleNodeAdaptive => {
            (single_node::single_node_adaptive(&mut o, t, cfg.alpha, cfg.eps, cfg.p_f, &mut rng)?, 1)
        }
        Algorithm::SingleNodeAvgJump => {
            (single_node::single_node_avg_jump(&mut o, t, cfg.alpha, cfg.eps, cfg.p_f, &mut rng)?, 1)
        }
        Algorithm::SingleNodeAvgFull => {
            (single_node::single_node_avg_full(&mut o, t, cfg.alpha, cfg.eps, cfg.p_f, &mut rng)?, 1)
        }
    };
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let exact = if n <= cfg.exact_cap {
        Some(match source {
            Some(s) => cell.exact_pair(s, cfg.alpha)?.get(t),
            None => cell.exact_node(cfg.alpha)?.get(t),
        })
    } else {
        None
    };
    let abs_error = exact.map(|x| (estimate - x).abs());
    let rel_error = exact.and_then(|x| (x > 0.0).then(|| (estimate - x).abs() / x));
    let success = exact.map(|x| is_success(problem, estimate, x, cfg.eps, delta));
    Ok(TrialResult {
        algorithm: cfg.algorithm,
        cell: cell_index,
        delta,
        eps: cfg.eps,
        p_f: cfg.p_f,
        alpha: cfg.alpha,
        trial,
        source,
        target,
        estimate,
        exact,
        abs_error,
        rel_error,
        success,
        outputs,
        queries: o.stats(),
        wall_ms,
    })
}

/// Runs every `(δ cell, trial)` pair, in parallel on the current rayon
/// pool, and returns the rows sorted by cell and trial.
///
/// Each trial draws from its own streams keyed by `(seed, cell, trial)`, so
/// the output is identical for any thread count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>> {
    cfg.validate()?;
    let cells = build_cells(cfg)?;
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..cfg.trials).map(move |t| (c, t))).collect();
    let mut rows = jobs
        .par_iter()
        .map(|&(c, t)| run_trial(cfg, c, &cells[c], t))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.cell, r.trial));
    Ok(rows)
}

/// [`run_experiment`] on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<TrialResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}
