mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stgq_core::{extract_feasible_graph, s_edge_min_distances, SocialGraph};

use common::{bfs_hops, oracle_distances, random_graph};

fn instance(seed: u64, n: usize, density: f64) -> SocialGraph {
    random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, density, 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hop_limited_distances_match_path_enumeration(
        seed in any::<u64>(),
        n in 2usize..=10,
        density in 0.15f64..0.8,
        s in 1usize..=5,
        qi in 0usize..10,
    ) {
        let g = instance(seed, n, density);
        let q = g.vertices().nth(qi % n).unwrap();
        let dp = s_edge_min_distances(&g, q, s).unwrap();
        prop_assert_eq!(dp.distances(), &oracle_distances(&g, q, s)[..]);
    }

    #[test]
    fn feasible_members_are_within_s_hops(
        seed in any::<u64>(),
        n in 2usize..=12,
        density in 0.1f64..0.6,
        s in 1usize..=4,
    ) {
        let g = instance(seed, n, density);
        let q = g.vertices().next().unwrap();
        let fg = extract_feasible_graph(&g, q, s).unwrap();
        let hops = bfs_hops(&g, q);
        for v in g.vertices() {
            let reachable = hops[v.index()].is_some_and(|h| h <= s);
            prop_assert_eq!(fg.contains(v), reachable);
        }
        prop_assert_eq!(fg.members()[0], q);
    }

    #[test]
    fn witness_paths_respect_radius_and_length(
        seed in any::<u64>(),
        n in 2usize..=12,
        density in 0.2f64..0.8,
        s in 1usize..=4,
    ) {
        let g = instance(seed, n, density);
        let q = g.vertices().next().unwrap();
        let fg = extract_feasible_graph(&g, q, s).unwrap();
        for &v in fg.members() {
            let path = fg.reconstruct_path(v).unwrap();
            prop_assert_eq!(path[0], q);
            prop_assert_eq!(*path.last().unwrap(), v);
            prop_assert!(path.len() - 1 <= s);
            let length: f64 = path.windows(2).map(|e| g.weight(e[0], e[1]).unwrap()).sum();
            prop_assert_eq!(length, fg.dist(v).unwrap());
        }
    }

    #[test]
    fn distances_shrink_as_the_radius_grows(
        seed in any::<u64>(),
        n in 2usize..=12,
        density in 0.2f64..0.7,
        s in 1usize..=5,
    ) {
        let g = instance(seed, n, density);
        let q = g.vertices().next().unwrap();
        let near = s_edge_min_distances(&g, q, s).unwrap();
        let far = s_edge_min_distances(&g, q, s + 1).unwrap();
        for (a, b) in near.distances().iter().zip(far.distances()) {
            prop_assert!(b <= a);
        }
    }
}

#[test]
fn shortcut_through_more_hops_is_ignored_at_small_radius() {
    let g = SocialGraph::new(
        Vec::<&str>::new(),
        [
            ("q", "a", 1.0),
            ("a", "b", 1.0),
            ("q", "b", 5.0),
            ("b", "c", 1.0),
        ],
    )
    .unwrap();
    let q = g.vertex("q").unwrap();
    let b = g.vertex("b").unwrap();
    let c = g.vertex("c").unwrap();
    let one = s_edge_min_distances(&g, q, 1).unwrap();
    assert_eq!(one.distance(b), 5.0);
    assert!(one.distance(c).is_infinite());
    let two = s_edge_min_distances(&g, q, 2).unwrap();
    assert_eq!(two.distance(b), 2.0);
    assert_eq!(two.distance(c), 6.0);
    let fg = extract_feasible_graph(&g, q, 2).unwrap();
    let path: Vec<&str> = fg
        .reconstruct_path(c)
        .unwrap()
        .iter()
        .map(|&v| g.name(v))
        .collect();
    assert_eq!(path, ["q", "b", "c"]);
}

#[test]
fn rejects_unknown_origin_and_zero_radius() {
    let g = SocialGraph::new(Vec::<&str>::new(), [("q", "a", 1.0)]).unwrap();
    let other = SocialGraph::new(["x", "y", "z"], Vec::<(&str, &str, f64)>::new()).unwrap();
    let stranger = other.vertex("z").unwrap();
    assert!(s_edge_min_distances(&g, stranger, 1).is_err());
    assert!(s_edge_min_distances(&g, g.vertex("q").unwrap(), 0).is_err());
}
