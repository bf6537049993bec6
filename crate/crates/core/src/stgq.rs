//! Social-temporal group queries: a social group query plus a period of `m`
//! consecutive slots in which every attendee is available.
//!
//! Every feasible period contains exactly one pivot slot (a multiple of `m`),
//! so the search runs once per pivot over the window of `2m - 1` slots around
//! it. Within a window, candidates are additionally ordered by temporal
//! extensibility and cut by availability pruning. The incumbent is shared
//! across pivots.

use std::time::Duration;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{extract_feasible_graph, SocialGraph};
use crate::schedule::{
    has_feasible_run, pivot_slots, run_around, AvailabilityTable, PivotWindow, SlotRange,
};
use crate::search::{Engine, Incumbent, Params, PruneConfig, SearchStats, TemporalCtx, Universe};
use crate::sgq::{checked_pow, Group, SgqQuery, SolveReport};
use crate::timing::Stopwatch;

pub const DEFAULT_PHI0: u32 = 2;
pub const DEFAULT_PHI_MAX: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StgqQuery {
    pub social: SgqQuery,
    /// Activity length in slots.
    pub m: usize,
    /// Starting exponent of the temporal-extensibility condition.
    pub phi0: u32,
    /// Once the exponent reaches this value the condition only asks for a
    /// nonnegative extensibility.
    pub phi_max: u32,
}

impl StgqQuery {
    pub fn new(social: SgqQuery, m: usize) -> Self {
        StgqQuery {
            social,
            m,
            phi0: DEFAULT_PHI0,
            phi_max: DEFAULT_PHI_MAX,
        }
    }

    pub fn with_phi(mut self, phi0: u32, phi_max: u32) -> Self {
        self.phi0 = phi0;
        self.phi_max = phi_max;
        self
    }

    pub(crate) fn validate(&self, graph: &SocialGraph) -> Result<()> {
        self.social.validate(graph)?;
        if self.m == 0 {
            return Err(Error::input("activity length m must be at least 1"));
        }
        if self.phi0 == 0 {
            return Err(Error::input("phi0 must be at least 1"));
        }
        if self.phi_max <= self.phi0 {
            return Err(Error::input("phi-max must exceed phi0"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StgqSolution {
    pub group: Group,
    /// `[t, t + m - 1]`.
    pub period: SlotRange,
}

/// `X = |T_S| - m`; an empty run has length zero.
pub fn temporal_extensibility(run: Option<SlotRange>, m: usize) -> i64 {
    run.map_or(0, |r| r.len() as i64) - m as i64
}

/// Right-hand side `(m - 1) * ((p - size) / p)^phi`, exactly.
pub fn temporal_rhs(m: usize, size: usize, p: usize, phi: u32) -> Option<Ratio<u128>> {
    let num = checked_pow(p.saturating_sub(size), phi)?.checked_mul(m.saturating_sub(1) as u128)?;
    let den = checked_pow(p, phi)?;
    Some(Ratio::new(num, den))
}

/// Temporal-extensibility condition `X >= (m - 1) * ((p - size) / p)^phi`,
/// `size` counting the chosen set after adding the candidate. With `forced`
/// the right-hand side is zero.
pub fn temporal_condition(
    extensibility: i64,
    m: usize,
    size: usize,
    p: usize,
    phi: u32,
    forced: bool,
) -> bool {
    if extensibility < 0 {
        return false;
    }
    if forced {
        return true;
    }
    let x = extensibility as u128;
    let fallback = || {
        extensibility as f64
            >= (m as f64 - 1.0) * ((p as f64 - size as f64) / p as f64).powi(phi as i32)
    };
    match (
        checked_pow(p.saturating_sub(size), phi),
        checked_pow(p, phi),
    ) {
        (Some(num), Some(den)) => match (
            x.checked_mul(den),
            num.checked_mul(m.saturating_sub(1) as u128),
        ) {
            (Some(lhs), Some(rhs)) => lhs >= rhs,
            _ => fallback(),
        },
        _ => fallback(),
    }
}

/// Availability pruning: the candidates cannot cover `m` slots around the
/// pivot when `t_plus - t_minus <= m`.
pub fn availability_prune(t_minus: usize, t_plus: usize, m: usize) -> bool {
    t_plus - t_minus <= m
}

/// State-level availability prune for `V_S` (by size) and the remaining
/// candidate names around a pivot window.
pub fn availability_prune_for(
    table: &AvailabilityTable,
    remaining: &[&str],
    chosen: usize,
    p: usize,
    pw: &PivotWindow,
    m: usize,
) -> bool {
    let n = remaining.len() as i64 - p as i64 + chosen as i64 + 1;
    if n <= 0 {
        return false;
    }
    let (below, above) = crate::schedule::tbar(table, remaining, pw, n as usize);
    availability_prune(below, above, m)
}

/// Solves an STGQ exactly with every pruning strategy enabled.
pub fn solve_stgq(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    query: &StgqQuery,
) -> Result<SolveReport<StgqSolution>> {
    solve_stgq_with(graph, table, query, PruneConfig::default())
}

pub fn solve_stgq_with(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    query: &StgqQuery,
    prunes: PruneConfig,
) -> Result<SolveReport<StgqSolution>> {
    query.validate(graph)?;
    let clock = Stopwatch::start();
    let social = &query.social;
    let m = query.m;
    let fg = extract_feasible_graph(graph, social.initiator, social.s)?;
    let q_name = graph.name(social.initiator);
    let params = Params {
        p: social.p,
        k: social.k,
        theta0: social.theta0,
        phi0: query.phi0,
        prunes,
    };

    let mut stats = SearchStats::default();
    let mut incumbent = Incumbent::empty();
    for pivot in pivot_slots(table.horizon(), m) {
        let pw = PivotWindow::new(pivot, m, table.horizon())?;
        if !has_feasible_run(table, q_name, &pw, m) {
            continue;
        }
        let uni = Universe::new(&fg, |v| has_feasible_run(table, graph.name(v), &pw, m));
        if uni.len() < social.p {
            continue;
        }
        let runs: Vec<Option<SlotRange>> = uni
            .ids
            .iter()
            .map(|&v| run_around(table.row(graph.name(v)), &pw))
            .collect();
        let blocked = pw
            .window
            .slots()
            .map(|t| {
                let mut set = FixedBitSet::with_capacity(uni.len());
                for (i, &v) in uni.ids.iter().enumerate() {
                    if !table.is_available(graph.name(v), t) {
                        set.insert(i);
                    }
                }
                set
            })
            .collect();
        let ctx = TemporalCtx {
            m,
            pivot: pw,
            runs,
            blocked,
            phi_max: query.phi_max,
        };
        let mut engine = Engine::new(&uni, &params, Some(&ctx), incumbent);
        engine.run();
        stats.absorb(&engine.stats);
        incumbent = engine.incumbent;
    }
    stats.elapsed = clock.elapsed().unwrap_or(Duration::ZERO);

    let solution = incumbent.is_set().then(|| {
        let run = incumbent.run.expect("temporal incumbent carries its run");
        let mut members = incumbent.members;
        members.sort();
        StgqSolution {
            group: Group {
                members,
                total: incumbent.total,
            },
            period: SlotRange::new(run.start, run.start + m - 1),
        }
    });
    Ok(SolveReport { solution, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &str) -> Vec<bool> {
        bits.bytes().map(|b| b == b'1').collect()
    }

    fn star_chords() -> SocialGraph {
        SocialGraph::new(
            Vec::<&str>::new(),
            [
                ("q", "a", 1.0),
                ("q", "b", 2.0),
                ("q", "c", 3.0),
                ("q", "d", 4.0),
                ("a", "b", 1.0),
                ("b", "c", 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn extensibility_worked_values() {
        assert_eq!(temporal_extensibility(Some(SlotRange::new(1, 5)), 3), 2);
        assert_eq!(temporal_extensibility(Some(SlotRange::new(4, 5)), 3), -1);
        assert_eq!(temporal_extensibility(Some(SlotRange::new(2, 4)), 3), 0);
        assert_eq!(temporal_extensibility(None, 3), -3);
    }

    #[test]
    fn temporal_condition_worked_values() {
        assert_eq!(temporal_rhs(3, 2, 4, 2), Some(Ratio::new(1, 2)));
        assert!(temporal_condition(2, 3, 2, 4, 2, false));
        for phi in 1..6 {
            assert!(!temporal_condition(-1, 3, 2, 4, phi, false));
            assert!(!temporal_condition(-1, 3, 2, 4, phi, true));
        }
        assert!(temporal_condition(0, 3, 2, 4, 2, true));
        assert!(!temporal_condition(0, 3, 2, 4, 2, false));
        // phi = 1, nearly empty group: needs close to m - 1 spare slots
        assert!(!temporal_condition(1, 5, 2, 4, 1, false));
    }

    #[test]
    fn availability_prune_worked_values() {
        assert!(availability_prune(4, 7, 3));
        // sentinels of an unclipped window are 2m apart
        assert!(!availability_prune(3, 9, 3));
    }

    #[test]
    fn all_available_matches_social_solution() {
        let g = star_chords();
        let q = g.vertex("q").unwrap();
        let table = AvailabilityTable::all_available(4, ["q", "a", "b", "c", "d"]).unwrap();
        let social = SgqQuery::new(q, 3, 1, 0);
        let r = solve_stgq(&g, &table, &StgqQuery::new(social, 1)).unwrap();
        let sol = r.solution.unwrap();
        assert_eq!(sol.group.total, 3.0);
        assert_eq!(sol.period.len(), 1);
    }

    #[test]
    fn narrow_common_window() {
        let g = star_chords();
        let q = g.vertex("q").unwrap();
        let mut table = AvailabilityTable::new(6).unwrap();
        for v in ["q", "a", "b", "c", "d"] {
            table.insert(v, row("011100")).unwrap();
        }
        let query = StgqQuery::new(SgqQuery::new(q, 3, 1, 0), 3);
        let sol = solve_stgq(&g, &table, &query).unwrap().solution.unwrap();
        assert_eq!(sol.group.total, 3.0);
        assert_eq!(sol.period, SlotRange::new(2, 4));
        let names: Vec<&str> = sol.group.members.iter().map(|&v| g.name(v)).collect();
        assert_eq!(names, ["a", "b", "q"]);
    }

    #[test]
    fn activity_longer_than_horizon_is_infeasible() {
        let g = star_chords();
        let q = g.vertex("q").unwrap();
        let table = AvailabilityTable::all_available(2, ["q", "a"]).unwrap();
        let query = StgqQuery::new(SgqQuery::new(q, 2, 1, 0), 3);
        assert!(solve_stgq(&g, &table, &query).unwrap().solution.is_none());
    }

    #[test]
    fn missing_initiator_row_is_infeasible() {
        let g = star_chords();
        let q = g.vertex("q").unwrap();
        let table = AvailabilityTable::all_available(4, ["a", "b"]).unwrap();
        let query = StgqQuery::new(SgqQuery::new(q, 1, 1, 0), 2);
        assert!(solve_stgq(&g, &table, &query).unwrap().solution.is_none());
    }

    #[test]
    fn rejects_bad_phi() {
        let g = star_chords();
        let q = g.vertex("q").unwrap();
        let table = AvailabilityTable::all_available(4, ["q"]).unwrap();
        let base = StgqQuery::new(SgqQuery::new(q, 1, 1, 0), 2);
        assert!(solve_stgq(&g, &table, &base.with_phi(0, 5)).is_err());
        assert!(solve_stgq(&g, &table, &base.with_phi(3, 3)).is_err());
        assert!(solve_stgq(&g, &table, &StgqQuery { m: 0, ..base }).is_err());
    }
}
