use std::collections::btree_map::{BTreeMap, Entry};
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use stgq_core::baselines::{
    brute_force_group_count, brute_force_sgq, per_slot_stgq, SlotSolver, DEFAULT_ENUMERATION_CAP,
};
use stgq_core::io::{generate, EdgeModel, GenConfig, Instance};
use stgq_core::{solve_sgq, solve_stgq, SearchStats, SgqQuery, StgqQuery};

use crate::{CliError, Model, Status};

/// Comma-separated integers and inclusive ranges, e.g. `4..8` or `2,4,10..12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

#[derive(Debug)]
pub struct IntListError(String);

impl fmt::Display for IntListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IntListError {}

impl FromStr for IntList {
    type Err = IntListError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| IntListError(format!("`{t}` is not a non-negative integer")))
        };
        let mut values = Vec::new();
        for part in s.split(',') {
            match part.split_once("..") {
                Some((lo, hi)) => {
                    let (lo, hi) = (num(lo)?, num(hi.strip_prefix('=').unwrap_or(hi))?);
                    if lo > hi {
                        return Err(IntListError(format!("empty range `{part}`")));
                    }
                    values.extend(lo..=hi);
                }
                None => values.push(num(part)?),
            }
        }
        Ok(IntList(values))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algorithm {
    Sgselect,
    Brute,
    Stgselect,
    PerSlot,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Sgselect => "sgselect",
            Algorithm::Brute => "brute",
            Algorithm::Stgselect => "stgselect",
            Algorithm::PerSlot => "per-slot",
        }
    }

    fn temporal(self) -> bool {
        matches!(self, Algorithm::Stgselect | Algorithm::PerSlot)
    }
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sgselect")]
    algorithms: Vec<Algorithm>,
    /// Graph sizes.
    #[arg(short = 'n', long, default_value = "100")]
    n: IntList,
    #[arg(long, default_value = "1")]
    seeds: IntList,
    #[arg(short = 'p', long, default_value = "4")]
    p: IntList,
    #[arg(short = 's', long, default_value = "1")]
    s: IntList,
    #[arg(short = 'k', long, default_value = "0")]
    k: IntList,
    /// Activity lengths; used by the temporal algorithms only.
    #[arg(short = 'm', long, default_value = "3")]
    m: IntList,
    #[arg(long, value_enum, default_value_t = Model::Attachment)]
    model: Model,
    #[arg(long, default_value_t = 3)]
    edges_per_vertex: usize,
    #[arg(long, default_value_t = 24)]
    horizon: usize,
    #[arg(long, default_value_t = 0.6)]
    avail_prob: f64,
    #[arg(long, default_value_t = 0.7)]
    run_bias: f64,
    /// Brute-force instances with more candidate groups are skipped.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    workers: Option<usize>,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// One CSV line of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: &'static str,
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub k: usize,
    pub m: Option<usize>,
    pub total: Option<f64>,
    /// Search nodes, or enumerated groups for brute force.
    pub nodes: u64,
    pub prune_distance: u64,
    pub prune_acquaintance: u64,
    pub prune_availability: u64,
    pub runtime_ms: f64,
    /// `optimal`, `failure`, or `skipped`.
    pub status: &'static str,
}

#[derive(Clone, Copy)]
struct Job {
    algorithm: Algorithm,
    n: usize,
    seed: u64,
    p: usize,
    s: usize,
    k: usize,
    m: Option<usize>,
}

fn jobs(a: &BenchArgs) -> Vec<Job> {
    let mut out = Vec::new();
    for &algorithm in &a.algorithms {
        let ms: Vec<Option<usize>> = if algorithm.temporal() {
            a.m.0.iter().map(|&m| Some(m)).collect()
        } else {
            vec![None]
        };
        for &n in &a.n.0 {
            for &seed in &a.seeds.0 {
                for &p in &a.p.0 {
                    for &s in &a.s.0 {
                        for &k in &a.k.0 {
                            for &m in &ms {
                                out.push(Job {
                                    algorithm,
                                    n,
                                    seed: seed as u64,
                                    p,
                                    s,
                                    k,
                                    m,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn row(job: Job, inst: &Instance, cap: u128) -> Result<BenchRow, CliError> {
    let social = SgqQuery::new(inst.initiator, job.p, job.s, job.k);
    let temporal = |m: Option<usize>| StgqQuery::new(social, m.expect("temporal job has m"));
    let (total, stats, status, nodes) = match job.algorithm {
        Algorithm::Sgselect => {
            let r = solve_sgq(&inst.graph, &social)?;
            (r.solution.map(|g| g.total), r.stats, None, None)
        }
        Algorithm::Stgselect => {
            let r = solve_stgq(&inst.graph, &inst.table, &temporal(job.m))?;
            (r.solution.map(|s| s.group.total), r.stats, None, None)
        }
        Algorithm::PerSlot => {
            let r = per_slot_stgq(
                &inst.graph,
                &inst.table,
                &temporal(job.m),
                SlotSolver::Select,
            )?;
            (r.solution.map(|s| s.group.total), r.stats, None, None)
        }
        Algorithm::Brute => {
            let groups = brute_force_group_count(&inst.graph, &social)?;
            let nodes = u64::try_from(groups).unwrap_or(u64::MAX);
            if groups > cap {
                (None, SearchStats::default(), Some("skipped"), Some(nodes))
            } else {
                let clock = Instant::now();
                let best = brute_force_sgq(&inst.graph, &social, cap)?;
                let stats = SearchStats {
                    elapsed: clock.elapsed(),
                    ..SearchStats::default()
                };
                (best.map(|g| g.total), stats, None, Some(nodes))
            }
        }
    };
    let status = status.unwrap_or(if total.is_some() {
        "optimal"
    } else {
        "failure"
    });
    Ok(BenchRow {
        algorithm: job.algorithm.name(),
        seed: job.seed,
        n: job.n,
        p: job.p,
        s: job.s,
        k: job.k,
        m: job.m,
        total,
        nodes: nodes.unwrap_or(stats.nodes_expanded),
        prune_distance: stats.prunes.distance,
        prune_acquaintance: stats.prunes.acquaintance,
        prune_availability: stats.prunes.availability,
        runtime_ms: (stats.elapsed.as_secs_f64() * 1e6).round() / 1e3,
        status,
    })
}

/// Runs the sweep; rows come out in grid order regardless of thread count.
pub fn sweep(a: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    let model = match a.model {
        Model::Attachment => EdgeModel::Attachment,
        Model::Uniform => EdgeModel::Uniform,
    };
    let grid = jobs(a);
    let mut instances = BTreeMap::new();
    for job in &grid {
        if let Entry::Vacant(slot) = instances.entry((job.n, job.seed)) {
            let cfg = GenConfig {
                n: job.n,
                model,
                edges_per_vertex: a.edges_per_vertex,
                horizon: a.horizon,
                avail_prob: a.avail_prob,
                run_bias: a.run_bias,
                seed: job.seed,
                ..GenConfig::default()
            };
            slot.insert(generate(&cfg)?);
        }
    }
    let work = || {
        grid.par_iter()
            .map(|&job| row(job, &instances[&(job.n, job.seed)], a.cap))
            .collect()
    };
    match a.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(work),
        None => work(),
    }
}

pub fn run(a: BenchArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    if a.workers == Some(0) {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let rows = sweep(&a)?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in &rows {
            w.serialize(r)
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
        w.flush()?;
    }
    match &a.out {
        Some(path) => std::fs::write(path, &buf).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => out.write_all(&buf)?,
    }
    Ok(Status::Done)
}
