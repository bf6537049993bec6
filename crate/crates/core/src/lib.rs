//! Exact solvers for social group queries (SGQ) and social-temporal group
//! queries (STGQ).
//!
//! Given a weighted social graph, an initiator, and per-person availability
//! calendars, the solvers find the group of a requested size that minimizes
//! the total hop-limited social distance to the initiator, subject to a hop
//! radius, an acquaintance bound, and (for STGQ) a common free period.
//!
//! ```
//! use stgq_core::{solve_sgq, SgqQuery, SocialGraph};
//!
//! let graph = SocialGraph::new(
//!     Vec::<&str>::new(),
//!     [("q", "a", 1.0), ("q", "b", 2.0), ("a", "b", 1.0), ("q", "c", 1.5)],
//! )
//! .unwrap();
//! let q = graph.vertex("q").unwrap();
//! let report = solve_sgq(&graph, &SgqQuery::new(q, 3, 1, 0)).unwrap();
//! let group = report.solution.unwrap();
//! assert_eq!(group.total, 3.0);
//! ```

pub mod baselines;
pub mod error;
pub mod graph;
pub mod io;
pub mod ip;
pub mod schedule;
mod search;
pub mod sgq;
pub mod stgq;
mod timing;

pub use error::{Error, Result};
pub use graph::{
    extract_feasible_graph, s_edge_min_distances, FeasibleGraph, HopDistances, SocialGraph,
    VertexId,
};
pub use schedule::{
    common_run, has_feasible_run, pivot_slots, tbar, AvailabilityTable, PivotWindow, SlotRange,
};
pub use search::{PruneConfig, PruneCounts, SearchStats};
pub use sgq::{solve_sgq, solve_sgq_with, Group, SgqQuery, SolveReport};
pub use stgq::{solve_stgq, solve_stgq_with, StgqQuery, StgqSolution};
