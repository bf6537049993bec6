//! Reference oracles and comparison heuristics.
//!
//! * [`brute_force_sgq`] enumerates every candidate group; exact but capped.
//! * [`per_slot_stgq`] solves one social query per start slot.
//! * [`pc_arrange`] imitates an initiator phoning friends in order of
//!   closeness and keeping whoever still fits a common free period.
//! * [`stg_arrange`] finds the smallest acquaintance bound for which the
//!   exact solver matches or beats [`pc_arrange`].

use std::time::Duration;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{extract_feasible_graph, FeasibleGraph, SocialGraph, VertexId};
use crate::schedule::{AvailabilityTable, SlotRange};
use crate::search::{PruneConfig, SearchStats};
use crate::sgq::{satisfies_acquaintance, solve_on_feasible, Group, SgqQuery, SolveReport};
use crate::stgq::{solve_stgq, StgqQuery, StgqSolution};
use crate::timing::Stopwatch;

/// Default cap on the number of groups the exhaustive oracle will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exhaustive SGQ oracle over all `(p-1)`-subsets of `V_F - {q}`.
pub fn brute_force_sgq(graph: &SocialGraph, query: &SgqQuery, cap: u128) -> Result<Option<Group>> {
    query.validate(graph)?;
    let fg = extract_feasible_graph(graph, query.initiator, query.s)?;
    brute_force_on(&fg, query, cap, |_| true)
}

/// Candidate groups enumerated by [`brute_force_sgq`] for this query.
pub fn brute_force_group_count(graph: &SocialGraph, query: &SgqQuery) -> Result<u128> {
    query.validate(graph)?;
    let fg = extract_feasible_graph(graph, query.initiator, query.s)?;
    Ok(binomial(fg.len() - 1, query.p - 1))
}

fn brute_force_on(
    fg: &FeasibleGraph<'_>,
    query: &SgqQuery,
    cap: u128,
    mut keep: impl FnMut(VertexId) -> bool,
) -> Result<Option<Group>> {
    let graph = fg.graph();
    let q = query.initiator;
    let others: Vec<VertexId> = fg
        .members()
        .iter()
        .copied()
        .filter(|&v| v != q && keep(v))
        .collect();
    let groups = binomial(others.len(), query.p - 1);
    if groups > cap {
        return Err(Error::OracleTooLarge { groups, cap });
    }
    let dist = |v: VertexId| fg.dist(v).expect("feasible member");
    let mut best: Option<Group> = None;
    for combo in others.iter().copied().combinations(query.p - 1) {
        let mut group = Vec::with_capacity(query.p);
        group.push(q);
        group.extend(combo);
        if !satisfies_acquaintance(&group, query.k, graph) {
            continue;
        }
        let total: f64 = group.iter().map(|&v| dist(v)).sum();
        if best.as_ref().is_none_or(|b| total < b.total) {
            group.sort();
            best = Some(Group {
                members: group,
                total,
            });
        }
    }
    Ok(best)
}

/// Which social solver [`per_slot_stgq`] runs for each start slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotSolver {
    Select,
    BruteForce { cap: u128 },
}

/// STGQ by sequential start slots: for each `t`, keep only vertices free on
/// all of `[t, t+m-1]` and solve the induced social query. Distances are the
/// hop-limited distances of the full graph. Ties keep the earliest period.
pub fn per_slot_stgq(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    query: &StgqQuery,
    solver: SlotSolver,
) -> Result<SolveReport<StgqSolution>> {
    query.validate(graph)?;
    let clock = Stopwatch::start();
    let social = &query.social;
    let m = query.m;
    let horizon = table.horizon();
    let mut stats = SearchStats::default();
    let mut best: Option<StgqSolution> = None;
    if m <= horizon {
        let fg = extract_feasible_graph(graph, social.initiator, social.s)?;
        let free_through =
            |v: VertexId, t: usize| (t..t + m).all(|slot| table.is_available(graph.name(v), slot));
        for t in 1..=horizon + 1 - m {
            if !free_through(social.initiator, t) {
                continue;
            }
            let keep = |v: VertexId| free_through(v, t);
            let group = match solver {
                SlotSolver::Select => {
                    let report = solve_on_feasible(&fg, social, PruneConfig::default(), keep);
                    stats.absorb(&report.stats);
                    report.solution
                }
                SlotSolver::BruteForce { cap } => brute_force_on(&fg, social, cap, keep)?,
            };
            if let Some(group) = group {
                if best.as_ref().is_none_or(|b| group.total < b.group.total) {
                    best = Some(StgqSolution {
                        group,
                        period: SlotRange::new(t, t + m - 1),
                    });
                }
            }
        }
    }
    stats.elapsed = clock.elapsed().unwrap_or(Duration::ZERO);
    Ok(SolveReport {
        solution: best,
        stats,
    })
}

/// Result of the phone-call imitation.
#[derive(Clone, Debug, PartialEq)]
pub struct PcArrangeResult {
    pub group: Group,
    /// Earliest `m`-slot window shared by every member.
    pub period: SlotRange,
    /// Observed acquaintance bound: the most non-neighbors any member has.
    pub k_h: usize,
}

/// Earliest start of `m` consecutive slots in which all `members` are free.
fn earliest_common_window(table: &AvailabilityTable, names: &[&str], m: usize) -> Option<usize> {
    let mut run = 0;
    for t in 1..=table.horizon() {
        if names.iter().all(|v| table.is_available(v, t)) {
            run += 1;
            if run >= m {
                return Some(t + 1 - m);
            }
        } else {
            run = 0;
        }
    }
    None
}

/// Greedy invitation: scan `V_F - {q}` by ascending distance (ties by vertex
/// order) and keep each invitee iff everyone invited so far still shares some
/// window of `m` free slots in the horizon. Skipped friends are never asked
/// again. The acquaintance bound of the query is ignored.
pub fn pc_arrange(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    query: &StgqQuery,
) -> Result<Option<PcArrangeResult>> {
    query.validate(graph)?;
    let social = &query.social;
    let m = query.m;
    let fg = extract_feasible_graph(graph, social.initiator, social.s)?;
    let dist = |v: VertexId| fg.dist(v).expect("feasible member");
    let mut order: Vec<VertexId> = fg
        .members()
        .iter()
        .copied()
        .filter(|&v| v != social.initiator)
        .collect();
    order.sort_by(|&a, &b| dist(a).total_cmp(&dist(b)).then(a.cmp(&b)));

    let mut invited = vec![social.initiator];
    let mut names = vec![graph.name(social.initiator)];
    if earliest_common_window(table, &names, m).is_none() {
        return Ok(None);
    }
    for v in order {
        if invited.len() == social.p {
            break;
        }
        names.push(graph.name(v));
        if earliest_common_window(table, &names, m).is_some() {
            invited.push(v);
        } else {
            names.pop();
        }
    }
    if invited.len() < social.p {
        return Ok(None);
    }
    let start = earliest_common_window(table, &names, m).expect("kept invariant");
    let total = invited.iter().map(|&v| dist(v)).sum();
    let k_h = invited
        .iter()
        .map(|&v| {
            invited
                .iter()
                .filter(|&&w| w != v && !graph.is_adjacent(v, w))
                .count()
        })
        .max()
        .unwrap_or(0);
    invited.sort();
    Ok(Some(PcArrangeResult {
        group: Group {
            members: invited,
            total,
        },
        period: SlotRange::new(start, start + m - 1),
        k_h,
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StgArrangeResult {
    /// Smallest acquaintance bound whose optimum is no worse than PCArrange.
    pub k: usize,
    pub solution: StgqSolution,
    pub pc: PcArrangeResult,
}

/// Relative slack for comparing totals summed in different orders.
const TOTAL_SLACK: f64 = 1e-9;

pub(crate) fn no_worse(total: f64, reference: f64) -> bool {
    total <= reference + TOTAL_SLACK * reference.abs().max(1.0)
}

/// Raises `k` from zero until the exact STGQ optimum is no worse than the
/// PCArrange total. The query's own `k` is ignored.
pub fn stg_arrange(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    query: &StgqQuery,
) -> Result<Option<StgArrangeResult>> {
    let Some(pc) = pc_arrange(graph, table, query)? else {
        return Ok(None);
    };
    for k in 0..=pc.k_h {
        let mut q = *query;
        q.social.k = k;
        if let Some(solution) = solve_stgq(graph, table, &q)?.solution {
            if no_worse(solution.group.total, pc.group.total) {
                return Ok(Some(StgArrangeResult { k, solution, pc }));
            }
        }
    }
    unreachable!("the PCArrange group is feasible at k = k_h")
}
