//! Random instances and independent oracles shared by the integration tests.
//! Nothing here calls the solver code paths under test.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stgq_core::{AvailabilityTable, SlotRange, SocialGraph, VertexId};

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i:02}")).collect()
}

/// Erdos-Renyi graph on `n` named vertices with integer weights in `1..=wmax`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64, wmax: u32) -> SocialGraph {
    let names = names(n);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((
                    names[u].clone(),
                    names[v].clone(),
                    rng.gen_range(1..=wmax) as f64,
                ));
            }
        }
    }
    SocialGraph::new(names, edges).unwrap()
}

/// Independent Bernoulli slots for every vertex of `graph`.
pub fn random_table(
    rng: &mut ChaCha8Rng,
    graph: &SocialGraph,
    horizon: usize,
    prob: f64,
) -> AvailabilityTable {
    let mut table = AvailabilityTable::new(horizon).unwrap();
    for v in graph.vertices() {
        let row = (0..horizon).map(|_| rng.gen_bool(prob)).collect();
        table.insert(graph.name(v), row).unwrap();
    }
    table
}

/// Minimum weight over simple paths from `q` with at most `s` edges, by
/// exhaustive depth-first enumeration.
pub fn oracle_distances(graph: &SocialGraph, q: VertexId, s: usize) -> Vec<f64> {
    fn dfs(
        graph: &SocialGraph,
        v: VertexId,
        len: f64,
        hops: usize,
        s: usize,
        on_path: &mut Vec<bool>,
        best: &mut [f64],
    ) {
        if len < best[v.index()] {
            best[v.index()] = len;
        }
        if hops == s {
            return;
        }
        for &(w, c) in graph.neighbors(v) {
            if !on_path[w.index()] {
                on_path[w.index()] = true;
                dfs(graph, w, len + c, hops + 1, s, on_path, best);
                on_path[w.index()] = false;
            }
        }
    }
    let mut best = vec![f64::INFINITY; graph.num_vertices()];
    let mut on_path = vec![false; graph.num_vertices()];
    on_path[q.index()] = true;
    dfs(graph, q, 0.0, 0, s, &mut on_path, &mut best);
    best
}

/// Breadth-first hop counts from `q`.
pub fn bfs_hops(graph: &SocialGraph, q: VertexId) -> Vec<Option<usize>> {
    let mut hops = vec![None; graph.num_vertices()];
    hops[q.index()] = Some(0);
    let mut queue = std::collections::VecDeque::from([q]);
    while let Some(v) = queue.pop_front() {
        let h = hops[v.index()].unwrap();
        for &(w, _) in graph.neighbors(v) {
            if hops[w.index()].is_none() {
                hops[w.index()] = Some(h + 1);
                queue.push_back(w);
            }
        }
    }
    hops
}

pub fn non_neighbors_within(graph: &SocialGraph, group: &[VertexId], v: VertexId) -> usize {
    group
        .iter()
        .filter(|&&w| w != v && !graph.is_adjacent(v, w))
        .count()
}

pub fn acquainted(graph: &SocialGraph, group: &[VertexId], k: usize) -> bool {
    group
        .iter()
        .all(|&v| non_neighbors_within(graph, group, v) <= k)
}

/// Best total over all `p`-groups containing `q` drawn from vertices with a
/// finite distance that pass `allowed`, by bitmask enumeration.
pub fn oracle_best_total(
    graph: &SocialGraph,
    dist: &[f64],
    q: VertexId,
    p: usize,
    k: usize,
    allowed: impl Fn(VertexId) -> bool,
) -> Option<f64> {
    let cands: Vec<VertexId> = graph
        .vertices()
        .filter(|&v| v != q && dist[v.index()].is_finite() && allowed(v))
        .collect();
    assert!(cands.len() < 24, "oracle is for small instances");
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << cands.len()) {
        if mask.count_ones() as usize != p - 1 {
            continue;
        }
        let mut group = vec![q];
        group.extend(
            (0..cands.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| cands[i]),
        );
        if !acquainted(graph, &group, k) {
            continue;
        }
        let total: f64 = group.iter().map(|v| dist[v.index()]).sum();
        if best.is_none_or(|b| total < b) {
            best = Some(total);
        }
    }
    best
}

pub fn oracle_sgq(graph: &SocialGraph, q: VertexId, p: usize, s: usize, k: usize) -> Option<f64> {
    let dist = oracle_distances(graph, q, s);
    oracle_best_total(graph, &dist, q, p, k, |_| true)
}

pub fn free_through(table: &AvailabilityTable, name: &str, period: SlotRange) -> bool {
    period.slots().all(|t| table.is_available(name, t))
}

/// Best total over every start slot, each solved by [`oracle_best_total`].
pub fn oracle_stgq(
    graph: &SocialGraph,
    table: &AvailabilityTable,
    q: VertexId,
    p: usize,
    s: usize,
    k: usize,
    m: usize,
) -> Option<f64> {
    let dist = oracle_distances(graph, q, s);
    let mut best: Option<f64> = None;
    for t in 1..=(table.horizon() + 1).saturating_sub(m) {
        let period = SlotRange::new(t, t + m - 1);
        if !free_through(table, graph.name(q), period) {
            continue;
        }
        let here = oracle_best_total(graph, &dist, q, p, k, |v| {
            free_through(table, graph.name(v), period)
        });
        if let Some(total) = here {
            if best.is_none_or(|b| total < b) {
                best = Some(total);
            }
        }
    }
    best
}

/// Parameters of one random SGQ case.
#[derive(Clone, Copy, Debug)]
pub struct SgqCase {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub k: usize,
    pub density: f64,
}

pub fn sgq_case(seed: u64) -> SgqCase {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5a9e);
    SgqCase {
        seed,
        n: rng.gen_range(4..=14),
        p: rng.gen_range(2..=6),
        s: rng.gen_range(1..=3),
        k: rng.gen_range(0..=3),
        density: [0.2, 0.35, 0.5, 0.7][rng.gen_range(0..4)],
    }
}

pub fn sgq_instance(case: &SgqCase) -> (SocialGraph, VertexId) {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
    let graph = random_graph(&mut rng, case.n, case.density, 20);
    let q = graph.vertices().nth(rng.gen_range(0..case.n)).unwrap();
    (graph, q)
}

#[derive(Clone, Copy, Debug)]
pub struct StgqCase {
    pub seed: u64,
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub k: usize,
    pub m: usize,
    pub horizon: usize,
    pub avail: f64,
    pub density: f64,
}

pub fn stgq_case(seed: u64) -> StgqCase {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e3a_0c41);
    StgqCase {
        seed,
        n: rng.gen_range(4..=12),
        p: rng.gen_range(2..=5),
        s: rng.gen_range(1..=3),
        k: rng.gen_range(0..=3),
        m: rng.gen_range(1..=4),
        horizon: rng.gen_range(4..=24),
        avail: [0.5, 0.8][rng.gen_range(0..2)],
        density: [0.3, 0.5, 0.7][rng.gen_range(0..3)],
    }
}

pub fn stgq_instance(case: &StgqCase) -> (SocialGraph, AvailabilityTable, VertexId) {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
    let graph = random_graph(&mut rng, case.n, case.density, 20);
    let table = random_table(&mut rng, &graph, case.horizon, case.avail);
    let q = graph.vertices().nth(rng.gen_range(0..case.n)).unwrap();
    (graph, table, q)
}
