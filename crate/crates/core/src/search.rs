//! Branch-and-bound engine shared by the social and social-temporal solvers.
//!
//! Each frame owns its chosen set `V_S`, remaining candidates `V_A`, visited
//! marks, accumulated distance, and relaxation exponents. Children inherit the
//! exponents current at recursion time. The incumbent is shared by the whole
//! search (and across pivot windows for the temporal solver).

use std::time::Duration;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::{FeasibleGraph, VertexId};
use crate::schedule::{PivotWindow, SlotRange};
use crate::sgq::{acquaintance_prune, distance_prune, interior_condition};
use crate::stgq::{availability_prune, temporal_condition};

/// Toggles for the individual pruning strategies. All enabled by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneConfig {
    pub distance: bool,
    pub acquaintance: bool,
    pub exterior: bool,
    pub availability: bool,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            distance: true,
            acquaintance: true,
            exterior: true,
            availability: true,
        }
    }
}

impl PruneConfig {
    pub fn all_disabled() -> Self {
        PruneConfig {
            distance: false,
            acquaintance: false,
            exterior: false,
            availability: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    pub distance: u64,
    pub acquaintance: u64,
    pub exterior: u64,
    pub interior: u64,
    pub availability: u64,
}

/// Counters collected during one solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Number of inclusion branches formed.
    pub nodes_expanded: u64,
    pub prunes: PruneCounts,
    /// Wall time of the search, excluding input parsing.
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        self.prunes.distance += other.prunes.distance;
        self.prunes.acquaintance += other.prunes.acquaintance;
        self.prunes.exterior += other.prunes.exterior;
        self.prunes.interior += other.prunes.interior;
        self.prunes.availability += other.prunes.availability;
    }
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_nanos() as f64 / 1e6)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = f64::deserialize(d)?;
        // rounding to whole nanoseconds makes the round trip exact
        Ok(Duration::from_nanos((ms.max(0.0) * 1e6).round() as u64))
    }
}

/// Best feasible group found so far.
#[derive(Clone, Debug)]
pub(crate) struct Incumbent {
    pub total: f64,
    pub members: Vec<VertexId>,
    pub run: Option<SlotRange>,
}

impl Incumbent {
    pub fn empty() -> Self {
        Incumbent {
            total: f64::INFINITY,
            members: Vec::new(),
            run: None,
        }
    }

    pub fn is_set(&self) -> bool {
        !self.members.is_empty()
    }
}

/// Candidates of one search, re-indexed so that local index order is the
/// access order: ascending distance, ties by vertex id. Index 0 is `q`.
pub(crate) struct Universe {
    pub ids: Vec<VertexId>,
    pub dist: Vec<f64>,
    pub adj: Vec<FixedBitSet>,
}

impl Universe {
    pub fn new(fg: &FeasibleGraph<'_>, mut keep: impl FnMut(VertexId) -> bool) -> Self {
        let q = fg.origin();
        let mut others: Vec<VertexId> = fg
            .members()
            .iter()
            .copied()
            .filter(|&v| v != q && keep(v))
            .collect();
        let d = |v: VertexId| fg.dist(v).expect("member of the feasible graph");
        others.sort_by(|&a, &b| d(a).total_cmp(&d(b)).then(a.cmp(&b)));
        let mut ids = Vec::with_capacity(others.len() + 1);
        ids.push(q);
        ids.extend(others);

        let n = ids.len();
        let mut local = std::collections::HashMap::with_capacity(n);
        for (i, &v) in ids.iter().enumerate() {
            local.insert(v, i);
        }
        let graph = fg.graph();
        let adj = ids
            .iter()
            .map(|&v| {
                let mut row = FixedBitSet::with_capacity(n);
                for &(w, _) in graph.neighbors(v) {
                    if let Some(&j) = local.get(&w) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let dist = ids.iter().map(|&v| d(v)).collect();
        Universe { ids, dist, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}

/// Temporal data of one pivot window, in local indices.
pub(crate) struct TemporalCtx {
    pub m: usize,
    pub pivot: PivotWindow,
    pub runs: Vec<Option<SlotRange>>,
    /// `blocked[t - window.start]` = candidates unavailable at slot `t`.
    pub blocked: Vec<FixedBitSet>,
    pub phi_max: u32,
}

impl TemporalCtx {
    fn tbar(&self, remaining: &FixedBitSet, n: usize) -> (usize, usize) {
        let w = self.pivot.window;
        let hits = |t: usize| self.blocked[t - w.start].intersection_count(remaining) >= n;
        let below = (w.start..self.pivot.pivot)
            .rev()
            .find(|&t| hits(t))
            .unwrap_or(w.start - 1);
        let above = (self.pivot.pivot + 1..=w.end)
            .find(|&t| hits(t))
            .unwrap_or(w.end + 1);
        (below, above)
    }
}

#[derive(Clone)]
struct Frame {
    chosen: FixedBitSet,
    size: usize,
    remaining: FixedBitSet,
    visited: FixedBitSet,
    total: f64,
    theta: u32,
    phi: u32,
    run: Option<SlotRange>,
}

pub(crate) struct Params {
    pub p: usize,
    pub k: usize,
    pub theta0: u32,
    pub phi0: u32,
    pub prunes: PruneConfig,
}

pub(crate) struct Engine<'a> {
    uni: &'a Universe,
    params: &'a Params,
    temporal: Option<&'a TemporalCtx>,
    pub incumbent: Incumbent,
    pub stats: SearchStats,
}

impl<'a> Engine<'a> {
    pub fn new(
        uni: &'a Universe,
        params: &'a Params,
        temporal: Option<&'a TemporalCtx>,
        incumbent: Incumbent,
    ) -> Self {
        Engine {
            uni,
            params,
            temporal,
            incumbent,
            stats: SearchStats::default(),
        }
    }

    /// Searches every group containing local vertex 0.
    pub fn run(&mut self) {
        let n = self.uni.len();
        let mut chosen = FixedBitSet::with_capacity(n);
        chosen.insert(0);
        let mut remaining = FixedBitSet::with_capacity(n);
        remaining.insert_range(1..n);
        let run = self.temporal.map(|t| t.runs[0].expect("origin has a run"));
        let root = Frame {
            chosen,
            size: 1,
            remaining,
            visited: FixedBitSet::with_capacity(n),
            total: 0.0,
            theta: self.params.theta0,
            phi: self.params.phi0,
            run,
        };
        if self.params.p == 1 {
            self.offer(&root);
            return;
        }
        self.expand(root);
    }

    fn offer(&mut self, frame: &Frame) {
        if frame.total < self.incumbent.total {
            self.incumbent = Incumbent {
                total: frame.total,
                members: frame.chosen.ones().map(|i| self.uni.ids[i]).collect(),
                run: frame.run,
            };
        }
    }

    fn non_neighbors_in(&self, v: usize, set: &FixedBitSet, set_size: usize) -> usize {
        // v is a member of set
        set_size - 1 - self.uni.adj[v].intersection_count(set)
    }

    /// `U(V_S + u)`.
    fn unfamiliarity_with(&self, f: &Frame, u: usize) -> usize {
        let own = f.size - self.uni.adj[u].intersection_count(&f.chosen);
        f.chosen
            .ones()
            .map(|v| {
                self.non_neighbors_in(v, &f.chosen, f.size)
                    + usize::from(!self.uni.adj[v].contains(u))
            })
            .fold(own, usize::max)
    }

    /// `A(V_S + u)` against `V_A - u`.
    fn expansibility_with(&self, f: &Frame, u: usize) -> i64 {
        let k = self.params.k as i64;
        let mut rest = f.remaining.clone();
        rest.remove(u);
        let u_term = self.uni.adj[u].intersection_count(&rest) as i64 + k
            - (f.size - self.uni.adj[u].intersection_count(&f.chosen)) as i64;
        f.chosen
            .ones()
            .map(|v| {
                let nn = self.non_neighbors_in(v, &f.chosen, f.size)
                    + usize::from(!self.uni.adj[v].contains(u));
                self.uni.adj[v].intersection_count(&rest) as i64 + k - nn as i64
            })
            .fold(u_term, i64::min)
    }

    fn exterior_ok(&self, f: &Frame, u: usize) -> bool {
        let needed = self.params.p as i64 - f.size as i64 - 1;
        self.expansibility_with(f, u) >= needed
    }

    /// Checks the enabled prunes on a frame state; counts the one that fires.
    fn pruned(&mut self, f: &Frame) -> bool {
        let p = self.params.p;
        let missing = p - f.size;
        let cfg = self.params.prunes;
        if cfg.distance && self.incumbent.is_set() {
            let min_remaining = f
                .remaining
                .minimum()
                .map_or(f64::INFINITY, |i| self.uni.dist[i]);
            if distance_prune(self.incumbent.total, f.total, missing, min_remaining) {
                self.stats.prunes.distance += 1;
                return true;
            }
        }
        if cfg.acquaintance {
            let degrees: Vec<usize> = f
                .remaining
                .ones()
                .map(|v| self.uni.adj[v].intersection_count(&f.remaining))
                .collect();
            if acquaintance_prune(&degrees, f.size, p, self.params.k) {
                self.stats.prunes.acquaintance += 1;
                return true;
            }
        }
        if let (true, Some(t)) = (cfg.availability, self.temporal) {
            let size_a = f.remaining.count_ones(..) as i64;
            let n = size_a - missing as i64 + 1;
            if n > 0 {
                let (below, above) = t.tbar(&f.remaining, n as usize);
                if availability_prune(below, above, t.m) {
                    self.stats.prunes.availability += 1;
                    return true;
                }
            }
        }
        false
    }

    fn expand(&mut self, mut f: Frame) {
        let p = self.params.p;
        loop {
            if f.size + f.remaining.count_ones(..) < p {
                return;
            }
            let Some(u) = f.remaining.difference(&f.visited).next() else {
                if f.theta > 0 {
                    f.theta -= 1;
                    f.visited.clear();
                    continue;
                }
                if let Some(t) = self.temporal {
                    if f.phi < t.phi_max {
                        f.phi += 1;
                        f.visited.clear();
                        continue;
                    }
                }
                return;
            };

            if self.params.prunes.exterior && !self.exterior_ok(&f, u) {
                self.stats.prunes.exterior += 1;
                f.remaining.remove(u);
                continue;
            }
            let unfamiliarity = self.unfamiliarity_with(&f, u);
            if !interior_condition(unfamiliarity, self.params.k, f.size + 1, p, f.theta) {
                self.stats.prunes.interior += 1;
                if f.theta == 0 {
                    f.remaining.remove(u);
                } else {
                    f.visited.insert(u);
                }
                continue;
            }
            let mut child_run = None;
            if let Some(t) = self.temporal {
                let run = f
                    .run
                    .and_then(|r| t.runs[u].and_then(|ru| r.intersect(&ru)));
                let extensibility = run.map_or(0, |r| r.len() as i64) - t.m as i64;
                let forced = f.phi >= t.phi_max;
                if !temporal_condition(extensibility, t.m, f.size + 1, p, f.phi, forced) {
                    if extensibility < 0 {
                        f.remaining.remove(u);
                    } else {
                        f.visited.insert(u);
                    }
                    continue;
                }
                child_run = run;
            }

            // include u
            let mut child = f.clone();
            child.chosen.insert(u);
            child.size += 1;
            child.remaining.remove(u);
            child.visited.clear();
            child.total += self.uni.dist[u];
            child.run = child_run;
            self.stats.nodes_expanded += 1;
            if child.size == p {
                self.offer(&child);
            } else if !self.pruned(&child) {
                self.expand(child);
            }

            // exclude u
            f.remaining.remove(u);
            if self.pruned(&f) {
                return;
            }
        }
    }
}
