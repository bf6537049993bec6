//! Social group queries: pick `p` attendees (initiator included) within `s`
//! hops of the initiator, minimizing total social distance, such that every
//! attendee is unacquainted with at most `k` others in the group.
//!
//! The solver is an exact branch and bound. Candidates are accessed in
//! ascending distance, gated by the interior-unfamiliarity and
//! exterior-expansibility conditions, and subtrees are cut by distance and
//! acquaintance pruning.

use std::time::Duration;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{extract_feasible_graph, FeasibleGraph, SocialGraph, VertexId};
use crate::search::{Engine, Incumbent, Params, PruneConfig, SearchStats, Universe};
use crate::timing::Stopwatch;

pub const DEFAULT_THETA0: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SgqQuery {
    pub initiator: VertexId,
    /// Group size, initiator included.
    pub p: usize,
    /// Hop radius.
    pub s: usize,
    /// Maximum number of unacquainted co-attendees per attendee.
    pub k: usize,
    /// Starting exponent of the interior-unfamiliarity condition.
    pub theta0: u32,
}

impl SgqQuery {
    pub fn new(initiator: VertexId, p: usize, s: usize, k: usize) -> Self {
        SgqQuery {
            initiator,
            p,
            s,
            k,
            theta0: DEFAULT_THETA0,
        }
    }

    pub fn with_theta0(mut self, theta0: u32) -> Self {
        self.theta0 = theta0;
        self
    }

    pub(crate) fn validate(&self, graph: &SocialGraph) -> Result<()> {
        if !graph.contains(self.initiator) {
            return Err(Error::input(format!(
                "unknown initiator {}",
                self.initiator
            )));
        }
        if self.p == 0 {
            return Err(Error::input("group size p must be at least 1"));
        }
        if self.s == 0 {
            return Err(Error::input("social radius s must be at least 1"));
        }
        Ok(())
    }
}

/// A feasible group and its total social distance.
#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    /// Members in vertex-id order; always contains the initiator.
    pub members: Vec<VertexId>,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<S> {
    /// `None` when no feasible group exists.
    pub solution: Option<S>,
    pub stats: SearchStats,
}

// ---- numeric kernels -------------------------------------------------------

/// `base^exp` when it fits in 128 bits.
pub(crate) fn checked_pow(base: usize, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// Right-hand side `k * (size / p)^theta` of the interior condition, exactly.
/// `None` if the powers overflow 128 bits.
pub fn interior_rhs(k: usize, size: usize, p: usize, theta: u32) -> Option<Ratio<u128>> {
    let num = checked_pow(size, theta)?.checked_mul(k as u128)?;
    let den = checked_pow(p, theta)?;
    Some(Ratio::new(num, den))
}

/// Interior-unfamiliarity condition `U <= k * (size / p)^theta`, where `size`
/// counts the chosen set after adding the candidate.
pub fn interior_condition(
    unfamiliarity: usize,
    k: usize,
    size: usize,
    p: usize,
    theta: u32,
) -> bool {
    if theta == 0 {
        return unfamiliarity <= k;
    }
    match (checked_pow(size, theta), checked_pow(p, theta)) {
        (Some(sp), Some(pp)) => match (
            (unfamiliarity as u128).checked_mul(pp),
            (k as u128).checked_mul(sp),
        ) {
            (Some(lhs), Some(rhs)) => lhs <= rhs,
            _ => unfamiliarity as f64 <= k as f64 * (size as f64 / p as f64).powi(theta as i32),
        },
        _ => unfamiliarity as f64 <= k as f64 * (size as f64 / p as f64).powi(theta as i32),
    }
}

/// Exterior-expansibility condition `A >= p - size`, where `size` counts the
/// chosen set after adding the candidate.
pub fn exterior_condition_holds(expansibility: i64, size: usize, p: usize) -> bool {
    expansibility >= p as i64 - size as i64
}

/// Distance pruning: no completion can beat the incumbent when
/// `best - chosen_total < missing * min_remaining`.
pub fn distance_prune(best: f64, chosen_total: f64, missing: usize, min_remaining: f64) -> bool {
    if best.is_infinite() {
        return false;
    }
    if missing == 0 {
        return false;
    }
    best - chosen_total < missing as f64 * min_remaining
}

/// Acquaintance pruning over the inner degrees (neighbors inside `V_A`) of
/// the remaining candidates.
///
/// Fires when `sum(deg) - (|V_A| - x) * min(deg) < x * (x - 1 - k)` with
/// `x = p - chosen`. The left side bounds the total inner degree of the best
/// `x` candidates from above; every attendee drawn from `V_A` needs at least
/// `x - 1 - k` neighbors among the other `x - 1` drawn attendees.
pub fn acquaintance_prune(inner_degrees: &[usize], chosen: usize, p: usize, k: usize) -> bool {
    if chosen >= p {
        return false;
    }
    let x = (p - chosen) as i64;
    if inner_degrees.is_empty() {
        return true;
    }
    let sum: i64 = inner_degrees.iter().map(|&d| d as i64).sum();
    let min = *inner_degrees.iter().min().expect("nonempty") as i64;
    let left_out = inner_degrees.len() as i64 - x;
    sum - left_out * min < x * (x - 1 - k as i64)
}

// ---- set-level predicates --------------------------------------------------

fn non_neighbors(graph: &SocialGraph, v: VertexId, set: &[VertexId]) -> usize {
    set.iter()
        .filter(|&&w| w != v && !graph.is_adjacent(v, w))
        .count()
}

/// `U(V_S)`: the largest number of non-neighbors any member has inside `V_S`.
pub fn interior_unfamiliarity(chosen: &[VertexId], graph: &SocialGraph) -> usize {
    chosen
        .iter()
        .map(|&v| non_neighbors(graph, v, chosen))
        .max()
        .unwrap_or(0)
}

/// `A(V_S)`: over members, the fewest further attendees that member can still
/// accept (neighbors left in `V_A` plus unused non-neighbor quota).
pub fn exterior_expansibility(
    chosen: &[VertexId],
    remaining: &[VertexId],
    k: usize,
    graph: &SocialGraph,
) -> i64 {
    chosen
        .iter()
        .map(|&v| {
            let inside = remaining
                .iter()
                .filter(|&&w| graph.is_adjacent(v, w))
                .count() as i64;
            inside + k as i64 - non_neighbors(graph, v, chosen) as i64
        })
        .min()
        .unwrap_or(i64::MAX)
}

/// Interior condition for adding `v` to `chosen`.
pub fn interior_condition_for(
    chosen: &[VertexId],
    v: VertexId,
    theta: u32,
    query: &SgqQuery,
    graph: &SocialGraph,
) -> bool {
    let mut grown = chosen.to_vec();
    grown.push(v);
    interior_condition(
        interior_unfamiliarity(&grown, graph),
        query.k,
        grown.len(),
        query.p,
        theta,
    )
}

/// Exterior condition for adding `v` to `chosen`, with `v` leaving `remaining`.
pub fn exterior_condition_for(
    chosen: &[VertexId],
    v: VertexId,
    remaining: &[VertexId],
    query: &SgqQuery,
    graph: &SocialGraph,
) -> bool {
    let mut grown = chosen.to_vec();
    grown.push(v);
    let rest: Vec<VertexId> = remaining.iter().copied().filter(|&w| w != v).collect();
    exterior_condition_holds(
        exterior_expansibility(&grown, &rest, query.k, graph),
        grown.len(),
        query.p,
    )
}

/// Inner degree of each remaining candidate: its neighbors within `remaining`.
pub fn inner_degrees(remaining: &[VertexId], graph: &SocialGraph) -> Vec<usize> {
    remaining
        .iter()
        .map(|&v| {
            remaining
                .iter()
                .filter(|&&w| graph.is_adjacent(v, w))
                .count()
        })
        .collect()
}

/// Whether every member has at most `k` non-neighbors in the group.
pub fn satisfies_acquaintance(group: &[VertexId], k: usize, graph: &SocialGraph) -> bool {
    group.iter().all(|&v| non_neighbors(graph, v, group) <= k)
}

// ---- solver ----------------------------------------------------------------

/// Solves an SGQ exactly with every pruning strategy enabled.
pub fn solve_sgq(graph: &SocialGraph, query: &SgqQuery) -> Result<SolveReport<Group>> {
    solve_sgq_with(graph, query, PruneConfig::default())
}

pub fn solve_sgq_with(
    graph: &SocialGraph,
    query: &SgqQuery,
    prunes: PruneConfig,
) -> Result<SolveReport<Group>> {
    query.validate(graph)?;
    let fg = extract_feasible_graph(graph, query.initiator, query.s)?;
    Ok(solve_on_feasible(&fg, query, prunes, |_| true))
}

/// Runs the search over the members of `fg` accepted by `keep` (the origin is
/// always kept). Used directly by the per-slot baseline.
pub(crate) fn solve_on_feasible(
    fg: &FeasibleGraph<'_>,
    query: &SgqQuery,
    prunes: PruneConfig,
    keep: impl FnMut(VertexId) -> bool,
) -> SolveReport<Group> {
    let clock = Stopwatch::start();
    let uni = Universe::new(fg, keep);
    let params = Params {
        p: query.p,
        k: query.k,
        theta0: query.theta0,
        phi0: 0,
        prunes,
    };
    let mut stats = SearchStats::default();
    let mut incumbent = Incumbent::empty();
    if query.p <= uni.len() {
        let mut engine = Engine::new(&uni, &params, None, incumbent);
        engine.run();
        stats = engine.stats;
        incumbent = engine.incumbent;
    }
    stats.elapsed = clock.elapsed().unwrap_or(Duration::ZERO);
    let solution = incumbent.is_set().then(|| {
        let mut members = incumbent.members;
        members.sort();
        Group {
            members,
            total: incumbent.total,
        }
    });
    SolveReport { solution, stats }
}
