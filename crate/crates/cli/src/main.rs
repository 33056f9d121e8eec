use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pprq_core::exact::{exact_pagerank, exact_single_source, exact_single_target, PprVector, DEFAULT_TOL};
use pprq_core::harness::{self, ExperimentConfig, Format};
use pprq_core::instances::{generate, parameter_presets, Family, InstanceSpec};
use pprq_core::DirectedGraph;

/// Personalized PageRank estimation under a metered graph-query model.
#[derive(Debug, Parser)]
#[command(name = "pprq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a hard instance and write it as an edge list.
    Generate(GenerateArgs),
    /// Compute exact π vectors on an edge-list graph.
    Exact(ExactArgs),
    /// Run an experiment described by a JSON config.
    Run(RunArgs),
    /// Fit the log-log slope of mean total queries against δ.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Instance spec as JSON.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Family whose size parameters are derived from --n, --m and --delta.
    #[arg(long, required_unless_present = "config")]
    preset: Option<Family>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 8000)]
    m: usize,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    /// Apply the default swap to a preset instance.
    #[arg(long)]
    swap: bool,
    /// Edge-list destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the instance metadata (roles, designated nodes, closed forms) as JSON.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "vector")]
struct VectorChoice {
    /// π(s, ·)
    #[arg(long)]
    source: Option<usize>,
    /// π(·, t)
    #[arg(long)]
    target: Option<usize>,
    /// π(·)
    #[arg(long)]
    pagerank: bool,
}

#[derive(Debug, Args)]
struct ExactArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    which: VectorChoice,
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Results written by `run`.
    #[arg(long)]
    input: PathBuf,
    /// Format of the input file.
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_spec(path: &Path) -> Result<InstanceSpec> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(f)).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let spec: InstanceSpec = match (&a.config, a.preset) {
        (Some(path), _) => read_spec(path)?,
        (None, Some(family)) => {
            let spec = parameter_presets(family, a.n, a.m, a.delta, a.alpha)?;
            if a.swap {
                spec.swapped()
            } else {
                spec
            }
        }
        (None, None) => bail!("either --config or --preset is required"),
    };
    let (g, meta) = generate(&spec)?;
    let mut w = sink(a.out.as_deref())?;
    g.write_edge_list(&mut w)?;
    w.flush()?;
    if let Some(path) = a.meta {
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        serde_json::to_writer_pretty(BufWriter::new(f), &meta)?;
    }
    Ok(())
}

fn cmd_exact(a: ExactArgs) -> Result<()> {
    let f = File::open(&a.graph).with_context(|| format!("opening {}", a.graph.display()))?;
    let g = DirectedGraph::read_edge_list(BufReader::new(f))?;
    let v: PprVector = match (a.which.source, a.which.target) {
        (Some(s), _) => exact_single_source(&g, s, a.alpha, a.tol)?,
        (_, Some(t)) => exact_single_target(&g, t, a.alpha, a.tol)?,
        _ => exact_pagerank(&g, a.alpha, a.tol)?,
    };
    let mut w = sink(a.out.as_deref())?;
    match a.format {
        OutFormat::Csv => v.write_csv(&mut w)?,
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &v)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&a.config).with_context(|| format!("loading {}", a.config.display()))?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let rows = match a.threads {
        Some(k) => harness::run_experiment_with_threads(&cfg, k)?,
        None => harness::run_experiment(&cfg)?,
    };
    let mut w = sink(a.out.as_deref())?;
    harness::emit(&rows, a.format.into(), &mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<()> {
    let rows = harness::load_path(a.format.into(), &a.input)?;
    let fit = harness::fit_scaling(&rows)?;
    let report = serde_json::json!({ "fit": fit, "cells": harness::summarize(&rows) });
    let mut w = sink(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(a) => cmd_generate(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Run(a) => cmd_run(a),
        Command::Fit(a) => cmd_fit(a),
    }
}
