//! Text formats for graphs and schedules, the solution document, and a
//! seeded instance generator.
//!
//! Graph file: one edge `u v w` per line, `w` a positive finite decimal. A
//! line holding a single token declares an isolated vertex. Lines starting
//! with `#` are comments; a comment of the form `# initiator v` records a
//! suggested initiator and is written by the generator.
//!
//! Schedule file: the first non-comment line is `slots T`, then one line
//! `u B` per vertex where `B` is a string of `T` characters `0`/`1`, with
//! `1` meaning available.
//!
//! Vertex names cannot start with `#` in either format.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SocialGraph, VertexId};
use crate::schedule::{AvailabilityTable, SlotRange};
use crate::search::SearchStats;
use crate::sgq::Group;

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    let mut start_col = 0;
    for (i, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((start_col, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
            start_col = col;
        }
    }
    if let Some(s) = start {
        out.push((start_col, &line[s..]));
    }
    out
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim_start();
        (!trimmed.is_empty() && !trimmed.starts_with('#')).then_some((i + 1, line))
    })
}

pub fn parse_graph(text: &str) -> Result<SocialGraph> {
    let mut isolated = Vec::new();
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (ln, line) in content_lines(text) {
        let toks = tokens(line);
        match toks.as_slice() {
            [(_, v)] => isolated.push(v.to_string()),
            [(_, u), (cv, v), (cw, w)] => {
                if u == v {
                    return Err(Error::parse(ln, *cv, format!("self-loop on vertex {u}")));
                }
                let weight: f64 = w
                    .parse()
                    .map_err(|_| Error::parse(ln, *cw, format!("weight {w:?} is not a number")))?;
                if !(weight.is_finite() && weight > 0.0) {
                    return Err(Error::parse(
                        ln,
                        *cw,
                        format!("weight {w} must be positive and finite"),
                    ));
                }
                let key = if u < v { (*u, *v) } else { (*v, *u) };
                if !seen.insert(key) {
                    return Err(Error::parse(ln, 1, format!("duplicate edge {u}-{v}")));
                }
                edges.push((u.to_string(), v.to_string(), weight));
            }
            _ => {
                let col = toks.get(3).map_or(1, |t| t.0);
                return Err(Error::parse(
                    ln,
                    col,
                    "expected `u v weight` or a single vertex id",
                ));
            }
        }
    }
    SocialGraph::new(isolated, edges)
}

/// Value of the last `# initiator v` comment, if any.
pub fn initiator_hint(text: &str) -> Option<String> {
    text.lines().rev().find_map(|line| {
        let rest = line.trim_start().strip_prefix('#')?;
        match tokens(rest).as_slice() {
            [(_, "initiator"), (_, v)] => Some(v.to_string()),
            _ => None,
        }
    })
}

/// Edges in vertex order (`u < v`), then isolated vertices. Weights use the
/// shortest decimal that reads back to the same `f64`.
pub fn serialize_graph(graph: &SocialGraph) -> String {
    serialize_graph_with_initiator(graph, None)
}

pub fn serialize_graph_with_initiator(graph: &SocialGraph, initiator: Option<VertexId>) -> String {
    let mut out = String::new();
    if let Some(q) = initiator {
        writeln!(out, "# initiator {}", graph.name(q)).unwrap();
    }
    for (u, v, w) in graph.edges() {
        writeln!(out, "{} {} {}", graph.name(u), graph.name(v), w).unwrap();
    }
    for v in graph.vertices().filter(|&v| graph.degree(v) == 0) {
        writeln!(out, "{}", graph.name(v)).unwrap();
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<AvailabilityTable> {
    let mut lines = content_lines(text);
    let Some((ln, header)) = lines.next() else {
        return Err(Error::parse(1, 1, "missing `slots T` header"));
    };
    let horizon = match tokens(header).as_slice() {
        [(_, "slots"), (col, t)] => match t.parse::<usize>() {
            Ok(t) if t >= 1 => t,
            _ => {
                return Err(Error::parse(
                    ln,
                    *col,
                    format!("horizon {t:?} must be a positive integer"),
                ))
            }
        },
        [(col, word), ..] => {
            return Err(Error::parse(
                ln,
                *col,
                format!("unknown header {word:?}, expected `slots T`"),
            ))
        }
        [] => unreachable!("content lines are non-blank"),
    };
    let mut table = AvailabilityTable::new(horizon)?;
    for (ln, line) in lines {
        let toks = tokens(line);
        let [(_, v), (col, bits)] = toks.as_slice() else {
            let col = toks.get(2).map_or(1, |t| t.0);
            return Err(Error::parse(ln, col, "expected `vertex bitstring`"));
        };
        if let Some(off) = bits.chars().position(|c| c != '0' && c != '1') {
            return Err(Error::parse(
                ln,
                col + off,
                "availability must be a string of 0 and 1",
            ));
        }
        if bits.len() != horizon {
            return Err(Error::parse(
                ln,
                *col,
                format!("bitstring has {} slots, expected {horizon}", bits.len()),
            ));
        }
        if table.row(v).is_some() {
            return Err(Error::parse(ln, 1, format!("duplicate row for {v}")));
        }
        table.insert(*v, bits.bytes().map(|b| b == b'1').collect())?;
    }
    Ok(table)
}

pub fn serialize_schedule(table: &AvailabilityTable) -> String {
    let mut out = format!("slots {}\n", table.horizon());
    for (v, row) in table.rows() {
        out.push_str(v);
        out.push(' ');
        out.extend(row.iter().map(|&a| if a { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeModel {
    /// Preferential attachment: each new vertex links to existing vertices
    /// with probability proportional to their degree.
    Attachment,
    /// A random spanning tree topped up with uniformly random extra edges.
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub model: EdgeModel,
    pub edges_per_vertex: usize,
    /// Inclusive range of integer edge weights.
    pub weight_range: (u32, u32),
    pub horizon: usize,
    pub avail_prob: f64,
    pub run_bias: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 100,
            model: EdgeModel::Attachment,
            edges_per_vertex: 3,
            weight_range: (1, 100),
            horizon: 24,
            avail_prob: 0.6,
            run_bias: 0.7,
            seed: 1,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::input("n must be at least 2"));
        }
        if self.edges_per_vertex == 0 {
            return Err(Error::input("edges per vertex must be at least 1"));
        }
        let (lo, hi) = self.weight_range;
        if lo == 0 || lo > hi {
            return Err(Error::input(format!(
                "weight range [{lo}, {hi}] must satisfy 1 <= lo <= hi"
            )));
        }
        if self.horizon == 0 {
            return Err(Error::input("horizon must be at least one slot"));
        }
        for (name, p) in [("avail-prob", self.avail_prob), ("run-bias", self.run_bias)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::input(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: SocialGraph,
    pub table: AvailabilityTable,
    /// Highest-degree vertex (lowest id on ties).
    pub initiator: VertexId,
}

impl Instance {
    pub fn graph_text(&self) -> String {
        serialize_graph_with_initiator(&self.graph, Some(self.initiator))
    }
}

fn vertex_names(n: usize) -> Vec<String> {
    let width = (n - 1).to_string().len();
    (0..n).map(|i| format!("v{i:0width$}")).collect()
}

/// Generates a connected graph and a calendar for every vertex from a
/// ChaCha8 stream seeded by `config.seed`.
///
/// Availability rows are a two-state Markov chain: slot 1 is available with
/// probability `avail_prob`; every later slot copies its predecessor with
/// probability `run_bias` and is otherwise redrawn, which keeps the
/// stationary availability at `avail_prob` while clumping free time.
pub fn generate(config: &GenConfig) -> Result<Instance> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n;
    let names = vertex_names(n);
    let pairs = match config.model {
        EdgeModel::Attachment => attachment_edges(&mut rng, n, config.edges_per_vertex),
        EdgeModel::Uniform => uniform_edges(&mut rng, n, config.edges_per_vertex),
    };
    let (lo, hi) = config.weight_range;
    let edges: Vec<(String, String, f64)> = pairs
        .into_iter()
        .map(|(u, v)| {
            (
                names[u].clone(),
                names[v].clone(),
                rng.gen_range(lo..=hi) as f64,
            )
        })
        .collect();
    let graph = SocialGraph::new(names.clone(), edges)?;

    let mut table = AvailabilityTable::new(config.horizon)?;
    for name in &names {
        let mut row = Vec::with_capacity(config.horizon);
        let mut state = rng.gen_bool(config.avail_prob);
        row.push(state);
        for _ in 1..config.horizon {
            if !rng.gen_bool(config.run_bias) {
                state = rng.gen_bool(config.avail_prob);
            }
            row.push(state);
        }
        table.insert(name.clone(), row)?;
    }

    let initiator = graph
        .vertices()
        .max_by_key(|&v| (graph.degree(v), std::cmp::Reverse(v)))
        .expect("n >= 2");
    Ok(Instance {
        graph,
        table,
        initiator,
    })
}

fn attachment_edges(rng: &mut ChaCha8Rng, n: usize, per_vertex: usize) -> Vec<(usize, usize)> {
    let seed = (per_vertex + 1).min(n);
    let mut edges = Vec::new();
    // every edge contributes both endpoints, so sampling from this list is
    // sampling proportional to degree
    let mut endpoints = Vec::new();
    for u in 0..seed {
        for v in u + 1..seed {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for u in seed..n {
        let mut targets: Vec<usize> = Vec::with_capacity(per_vertex);
        while targets.len() < per_vertex.min(u) {
            let v = *endpoints.choose(rng).expect("seed clique has edges");
            if !targets.contains(&v) {
                targets.push(v);
            }
        }
        targets.sort_unstable();
        for v in targets {
            edges.push((v, u));
            endpoints.extend([v, u]);
        }
    }
    edges
}

fn uniform_edges(rng: &mut ChaCha8Rng, n: usize, per_vertex: usize) -> Vec<(usize, usize)> {
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for u in 1..n {
        let v = rng.gen_range(0..u);
        seen.insert((v, u));
        edges.push((v, u));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (n * per_vertex / 2).max(n - 1).min(max_edges);
    while edges.len() < target {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    edges
}

/// Version tag carried by every solution document.
pub const SOLUTION_SCHEMA: &str = "stgq-solution/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Sgq,
    Stgq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Failure,
}

/// Machine-readable result of one solver run.
///
/// Members are vertex names in id order. `total` and `members` are empty on
/// failure; `period` is present only for a solved STGQ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub schema: String,
    pub problem: Problem,
    pub status: Status,
    pub initiator: String,
    pub members: Vec<String>,
    pub total: Option<f64>,
    pub period: Option<SlotRange>,
    pub stats: SearchStats,
}

impl SolutionDocument {
    pub fn new(
        problem: Problem,
        graph: &SocialGraph,
        initiator: VertexId,
        found: Option<(&Group, Option<SlotRange>)>,
        stats: SearchStats,
    ) -> Self {
        let (status, members, total, period) = match found {
            Some((group, period)) => (
                Status::Optimal,
                group
                    .members
                    .iter()
                    .map(|&v| graph.name(v).to_string())
                    .collect(),
                Some(group.total),
                period,
            ),
            None => (Status::Failure, Vec::new(), None, None),
        };
        SolutionDocument {
            schema: SOLUTION_SCHEMA.to_string(),
            problem,
            status,
            initiator: graph.name(initiator).to_string(),
            members,
            total,
            period,
            stats,
        }
    }
}

/// Pretty-printed JSON, newline-terminated.
pub fn write_solution(doc: &SolutionDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document is always serializable");
    s.push('\n');
    s
}

pub fn read_solution(text: &str) -> Result<SolutionDocument> {
    let doc: SolutionDocument = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    if doc.schema != SOLUTION_SCHEMA {
        return Err(Error::parse(
            1,
            1,
            format!("unsupported schema {:?}", doc.schema),
        ));
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(r: Result<impl std::fmt::Debug>) -> (usize, usize) {
        match r {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_edges_both_ways() {
        let g = parse_graph("# header\nq a 1.5\n\n  a b 2\nz\n").unwrap();
        let (q, a, z) = (
            g.vertex("q").unwrap(),
            g.vertex("a").unwrap(),
            g.vertex("z").unwrap(),
        );
        assert_eq!(g.weight(q, a), Some(1.5));
        assert_eq!(g.weight(a, q), Some(1.5));
        assert_eq!(g.degree(z), 0);
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn graph_errors_carry_locations() {
        assert_eq!(parse_err(parse_graph("q a 1\na q 2\n")), (2, 1));
        assert_eq!(parse_err(parse_graph("q a 1\nq b x\n")), (2, 5));
        assert_eq!(parse_err(parse_graph("q a nan\n")), (1, 5));
        assert_eq!(parse_err(parse_graph("q a inf\n")), (1, 5));
        assert_eq!(parse_err(parse_graph("q a -1\n")), (1, 5));
        assert_eq!(parse_err(parse_graph("q a 0\n")), (1, 5));
        assert_eq!(parse_err(parse_graph("q q 1\n")), (1, 3));
        assert_eq!(parse_err(parse_graph("q a\n")), (1, 1));
        assert_eq!(parse_err(parse_graph("q a 1 extra\n")), (1, 7));
    }

    #[test]
    fn parses_schedule() {
        let t = parse_schedule("# c\nslots 4\nq 1011\n").unwrap();
        assert_eq!(t.horizon(), 4);
        let free: Vec<usize> = (1..=4).filter(|&s| t.is_available("q", s)).collect();
        assert_eq!(free, [1, 3, 4]);
    }

    #[test]
    fn schedule_errors_carry_locations() {
        assert_eq!(parse_err(parse_schedule("")), (1, 1));
        assert_eq!(parse_err(parse_schedule("horizon 4\n")), (1, 1));
        assert_eq!(parse_err(parse_schedule("slots x\n")), (1, 7));
        assert_eq!(parse_err(parse_schedule("slots 0\n")), (1, 7));
        assert_eq!(parse_err(parse_schedule("slots 4\nq 101\n")), (2, 3));
        assert_eq!(parse_err(parse_schedule("slots 4\nq 1021\n")), (2, 5));
        assert_eq!(
            parse_err(parse_schedule("slots 4\nq 1011\nq 0000\n")),
            (3, 1)
        );
        assert_eq!(parse_err(parse_schedule("slots 4\nq\n")), (2, 1));
    }

    #[test]
    fn initiator_comment_round_trips() {
        let g = parse_graph("a b 1\n").unwrap();
        let text = serialize_graph_with_initiator(&g, g.vertex("b"));
        assert_eq!(initiator_hint(&text).as_deref(), Some("b"));
        assert_eq!(parse_graph(&text).unwrap(), g);
        assert_eq!(initiator_hint("a b 1\n"), None);
    }

    #[test]
    fn generator_is_deterministic_and_connected() {
        for model in [EdgeModel::Attachment, EdgeModel::Uniform] {
            let cfg = GenConfig {
                n: 40,
                model,
                seed: 9,
                ..GenConfig::default()
            };
            let a = generate(&cfg).unwrap();
            let b = generate(&cfg).unwrap();
            assert_eq!(a.graph_text(), b.graph_text());
            assert_eq!(serialize_schedule(&a.table), serialize_schedule(&b.table));
            assert_eq!(a.graph.num_vertices(), 40);
            let hops = crate::graph::s_edge_min_distances(&a.graph, a.initiator, 40).unwrap();
            assert!(hops.distances().iter().all(|d| d.is_finite()));
            assert_eq!(vertex_names(40)[7], "v07");
        }
    }

    #[test]
    fn full_availability() {
        let cfg = GenConfig {
            n: 10,
            avail_prob: 1.0,
            ..GenConfig::default()
        };
        let inst = generate(&cfg).unwrap();
        assert!(inst.table.rows().all(|(_, r)| r.iter().all(|&a| a)));
    }

    #[test]
    fn rejects_bad_config() {
        let base = GenConfig::default();
        assert!(generate(&GenConfig {
            n: 1,
            ..base.clone()
        })
        .is_err());
        assert!(generate(&GenConfig {
            avail_prob: 1.5,
            ..base.clone()
        })
        .is_err());
        assert!(generate(&GenConfig {
            weight_range: (0, 3),
            ..base.clone()
        })
        .is_err());
        assert!(generate(&GenConfig {
            weight_range: (5, 3),
            ..base
        })
        .is_err());
    }

    #[test]
    fn failure_document() {
        let g = parse_graph("q a 1\n").unwrap();
        let doc = SolutionDocument::new(
            Problem::Sgq,
            &g,
            g.vertex("q").unwrap(),
            None,
            SearchStats::default(),
        );
        let text = write_solution(&doc);
        assert!(text.contains("\"status\": \"failure\""));
        assert_eq!(read_solution(&text).unwrap(), doc);
        assert_eq!(parse_err(read_solution("{\"schema\": 3}")).0, 1);
    }
}
