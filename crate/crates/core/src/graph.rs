//! Weighted social graphs and radius-constrained feasible graphs.
//!
//! Vertices are named by opaque whitespace-free tokens. Internally every vertex
//! is a [`VertexId`] whose order matches the lexicographic order of the names,
//! and that order is the tie-breaker used by every solver downstream.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a vertex inside a [`SocialGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Undirected graph with strictly positive edge weights (social distances).
#[derive(Clone, Debug, PartialEq)]
pub struct SocialGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    // sorted by neighbor id
    adj: Vec<Vec<(VertexId, f64)>>,
    num_edges: usize,
}

impl SocialGraph {
    /// Builds a graph from a vertex list and an edge list.
    ///
    /// Vertices mentioned only by edges are added implicitly. Self-loops,
    /// repeated pairs (in either orientation), and weights that are not
    /// strictly positive and finite are rejected.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, f64)>,
        S: Into<String>,
    {
        let mut raw_edges = Vec::new();
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        for (u, v, w) in edges {
            let (u, v) = (u.into(), v.into());
            names.push(u.clone());
            names.push(v.clone());
            raw_edges.push((u, v, w));
        }
        for name in &names {
            validate_token(name)?;
        }
        names.sort();
        names.dedup();
        let index: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i)))
            .collect();

        let mut adj = vec![Vec::new(); names.len()];
        for (u, v, w) in &raw_edges {
            if u == v {
                return Err(Error::input(format!("self-loop on vertex {u}")));
            }
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::input(format!(
                    "edge {u}-{v} has weight {w}; weights must be positive and finite"
                )));
            }
            let (a, b) = (index[u], index[v]);
            adj[a.0].push((b, *w));
            adj[b.0].push((a, *w));
        }
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_by_key(|&(n, _)| n);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::input(format!(
                    "duplicate edge {}-{}",
                    names[i], names[pair[0].0 .0]
                )));
            }
        }
        Ok(SocialGraph {
            names,
            index,
            adj,
            num_edges: raw_edges.len(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    /// Looks up a vertex by name, reporting an input error when absent.
    pub fn require(&self, name: &str) -> Result<VertexId> {
        self.vertex(name)
            .ok_or_else(|| Error::input(format!("unknown vertex {name}")))
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.names.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.adj[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.0].len()
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let list = &self.adj[u.0];
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.weight(u, v).is_some()
    }

    /// Every undirected edge once, as `(u, v, w)` with `u < v`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&(n, _)| n.0 > i)
                .map(move |&(n, w)| (VertexId(i), n, w))
        })
    }
}

fn validate_token(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        return Err(Error::input(format!(
            "vertex id {name:?} must be a non-empty token without whitespace"
        )));
    }
    Ok(())
}

/// Result of the hop-limited minimum-distance dynamic program rooted at `q`.
///
/// `d^i_{v}` is the minimum weight over paths from `q` to `v` using at most
/// `i` edges. Only the final layer is kept for distances; for predecessors
/// each round records which vertices improved and through whom, which is
/// enough to rebuild a witness path with at most `s` edges for every vertex.
#[derive(Clone, Debug)]
pub struct HopDistances {
    origin: VertexId,
    radius: usize,
    dist: Vec<f64>,
    // improvements[i][v] = Some(u) when round i+1 lowered v through u
    improvements: Vec<Vec<Option<VertexId>>>,
}

impl HopDistances {
    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `d^s_{v,q}`, infinite when `v` is farther than `s` hops.
    pub fn distance(&self, v: VertexId) -> f64 {
        self.dist[v.0]
    }

    pub fn distances(&self) -> &[f64] {
        &self.dist
    }

    /// Predecessor of `v` on its witness path, `None` for `q` and for
    /// unreachable vertices.
    pub fn predecessor(&self, v: VertexId) -> Option<VertexId> {
        if v == self.origin || !self.dist[v.0].is_finite() {
            return None;
        }
        self.improvements.iter().rev().find_map(|layer| layer[v.0])
    }

    /// Witness path `[q, .., v]` with at most `s` edges whose weights sum to
    /// `distance(v)`.
    pub fn path(&self, v: VertexId) -> Option<Vec<VertexId>> {
        if v.0 >= self.dist.len() || !self.dist[v.0].is_finite() {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        let mut layer = self.improvements.len();
        while cur != self.origin {
            // latest round <= layer where cur improved
            let (round, prev) = (1..=layer)
                .rev()
                .find_map(|r| self.improvements[r - 1][cur.0].map(|u| (r, u)))
                .expect("finite distance implies an improving round");
            path.push(prev);
            cur = prev;
            layer = round - 1;
        }
        path.reverse();
        Some(path)
    }
}

/// Runs `s` rounds of hop-limited relaxation from `q`.
pub fn s_edge_min_distances(graph: &SocialGraph, q: VertexId, s: usize) -> Result<HopDistances> {
    if !graph.contains(q) {
        return Err(Error::input(format!("unknown initiator {q}")));
    }
    if s == 0 {
        return Err(Error::input("social radius must be at least 1"));
    }
    let n = graph.num_vertices();
    let mut prev = vec![f64::INFINITY; n];
    prev[q.0] = 0.0;
    let mut improvements = Vec::with_capacity(s);
    for _ in 0..s {
        let mut cur = prev.clone();
        let mut improved = vec![None; n];
        let mut changed = false;
        for u in graph.vertices() {
            if u == q {
                continue;
            }
            for &(v, w) in graph.neighbors(u) {
                let candidate = prev[v.0] + w;
                if candidate < cur[u.0] {
                    cur[u.0] = candidate;
                    improved[u.0] = Some(v);
                    changed = true;
                }
            }
        }
        improvements.push(improved);
        prev = cur;
        if !changed {
            // later rounds would repeat this one
            break;
        }
    }
    Ok(HopDistances {
        origin: q,
        radius: s,
        dist: prev,
        improvements,
    })
}

/// Vertices within `s` hops of `q`, with their hop-limited distances.
#[derive(Clone, Debug)]
pub struct FeasibleGraph<'g> {
    graph: &'g SocialGraph,
    paths: HopDistances,
    members: Vec<VertexId>,
    in_graph: Vec<bool>,
}

/// Extracts `V_F = { v : d^s_{v,q} < inf }` and the induced subgraph.
pub fn extract_feasible_graph(
    graph: &SocialGraph,
    q: VertexId,
    s: usize,
) -> Result<FeasibleGraph<'_>> {
    let paths = s_edge_min_distances(graph, q, s)?;
    let in_graph: Vec<bool> = paths.dist.iter().map(|d| d.is_finite()).collect();
    let members = graph.vertices().filter(|v| in_graph[v.0]).collect();
    Ok(FeasibleGraph {
        graph,
        paths,
        members,
        in_graph,
    })
}

impl<'g> FeasibleGraph<'g> {
    pub fn graph(&self) -> &'g SocialGraph {
        self.graph
    }

    pub fn origin(&self) -> VertexId {
        self.paths.origin
    }

    pub fn radius(&self) -> usize {
        self.paths.radius
    }

    /// Members of `V_F` in id order (includes the origin).
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.in_graph.get(v.0).copied().unwrap_or(false)
    }

    pub fn dist(&self, v: VertexId) -> Option<f64> {
        self.contains(v).then(|| self.paths.dist[v.0])
    }

    pub fn pred(&self, v: VertexId) -> Option<VertexId> {
        self.paths.predecessor(v)
    }

    pub fn hop_distances(&self) -> &HopDistances {
        &self.paths
    }

    /// Induced edges `E_F` as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.graph
            .edges()
            .filter(|&(u, v, _)| self.contains(u) && self.contains(v))
    }

    /// Ordered witness path from the origin to `v`.
    pub fn reconstruct_path(&self, v: VertexId) -> Result<Vec<VertexId>> {
        if !self.contains(v) {
            return Err(Error::input(format!(
                "vertex {} is not within the social radius",
                if self.graph.contains(v) {
                    self.graph.name(v).to_string()
                } else {
                    v.to_string()
                }
            )));
        }
        Ok(self.paths.path(v).expect("member has a finite distance"))
    }
}
