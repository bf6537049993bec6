mod common;

use std::time::Duration;

use proptest::prelude::*;
use stgq_core::io::{
    generate, initiator_hint, parse_graph, parse_schedule, read_solution, serialize_graph,
    serialize_schedule, write_solution, EdgeModel, GenConfig, Problem, SolutionDocument, Status,
};
use stgq_core::{
    solve_sgq, AvailabilityTable, Group, PruneCounts, SearchStats, SgqQuery, SlotRange, SocialGraph,
};

fn graph_strategy() -> impl Strategy<Value = SocialGraph> {
    let weight = prop_oneof![
        (1u32..1000).prop_map(f64::from),
        (1e-6f64..1e6),
        Just(0.1),
        Just(f64::MIN_POSITIVE),
    ];
    (2usize..10)
        .prop_flat_map(move |n| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            let len = pairs.len();
            (
                Just(n),
                Just(pairs),
                proptest::collection::vec(any::<bool>(), len),
                proptest::collection::vec(weight.clone(), len),
            )
        })
        .prop_map(|(n, pairs, keep, weights)| {
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let edges: Vec<(String, String, f64)> = pairs
                .iter()
                .zip(keep)
                .zip(weights)
                .filter(|((_, k), _)| *k)
                .map(|((&(u, v), _), w)| (names[u].clone(), names[v].clone(), w))
                .collect();
            SocialGraph::new(names, edges).unwrap()
        })
}

fn table_strategy() -> impl Strategy<Value = AvailabilityTable> {
    (1usize..30, 0usize..6).prop_flat_map(|(horizon, rows)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), horizon), rows).prop_map(
            move |rows| {
                let mut t = AvailabilityTable::new(horizon).unwrap();
                for (i, row) in rows.into_iter().enumerate() {
                    t.insert(format!("u{i}"), row).unwrap();
                }
                t
            },
        )
    })
}

proptest! {
    #[test]
    fn graph_text_round_trips(g in graph_strategy()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn schedule_text_round_trips(t in table_strategy()) {
        let text = serialize_schedule(&t);
        let back = parse_schedule(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_schedule(&back), text);
    }

    #[test]
    fn solution_document_round_trips(
        members in proptest::collection::vec("[a-z]{1,6}", 0..6),
        total in proptest::option::of(0.0f64..1e6),
        period in proptest::option::of((1usize..50, 0usize..10)),
        nodes in any::<u32>(),
        nanos in 0u64..10_000_000_000,
    ) {
        let doc = SolutionDocument {
            schema: stgq_core::io::SOLUTION_SCHEMA.to_string(),
            problem: Problem::Stgq,
            status: if total.is_some() { Status::Optimal } else { Status::Failure },
            initiator: "q".into(),
            members,
            total,
            period: period.map(|(s, l)| SlotRange::new(s, s + l)),
            stats: SearchStats {
                nodes_expanded: nodes as u64,
                prunes: PruneCounts { distance: 1, acquaintance: 2, exterior: 3, interior: 4, availability: 5 },
                elapsed: Duration::from_nanos(nanos),
            },
        };
        prop_assert_eq!(read_solution(&write_solution(&doc)).unwrap(), doc);
    }
}

#[test]
fn generator_is_byte_identical_for_a_seed() {
    for model in [EdgeModel::Attachment, EdgeModel::Uniform] {
        let cfg = GenConfig {
            n: 60,
            model,
            seed: 42,
            ..GenConfig::default()
        };
        let (a, b) = (generate(&cfg).unwrap(), generate(&cfg).unwrap());
        assert_eq!(a.graph_text(), b.graph_text());
        assert_eq!(serialize_schedule(&a.table), serialize_schedule(&b.table));
        let other = generate(&GenConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.graph_text(), other.graph_text());
        let text = a.graph_text();
        assert_eq!(
            initiator_hint(&text).as_deref(),
            Some(a.graph.name(a.initiator))
        );
        assert_eq!(parse_graph(&text).unwrap(), a.graph);
    }
}

#[test]
fn generated_availability_tracks_the_requested_rate() {
    for (prob, bias) in [(0.3, 0.0), (0.6, 0.7), (0.85, 0.9)] {
        let cfg = GenConfig {
            n: 1000,
            horizon: 100,
            avail_prob: prob,
            run_bias: bias,
            seed: 5,
            ..GenConfig::default()
        };
        let inst = generate(&cfg).unwrap();
        let slots = inst.table.rows().map(|(_, r)| r.len()).sum::<usize>();
        let free = inst
            .table
            .rows()
            .map(|(_, r)| r.iter().filter(|&&a| a).count())
            .sum::<usize>();
        assert_eq!(slots, 100_000);
        let rate = free as f64 / slots as f64;
        assert!((rate - prob).abs() <= 0.02, "rate {rate} for target {prob}");
    }
}

#[test]
fn run_bias_clumps_free_time() {
    let flips = |bias: f64| {
        let cfg = GenConfig {
            n: 200,
            horizon: 50,
            avail_prob: 0.5,
            run_bias: bias,
            seed: 8,
            ..GenConfig::default()
        };
        let inst = generate(&cfg).unwrap();
        inst.table
            .rows()
            .map(|(_, r)| r.windows(2).filter(|w| w[0] != w[1]).count())
            .sum::<usize>()
    };
    assert!(flips(0.8) * 2 < flips(0.0));
}

#[test]
fn singleton_solution_document() {
    let g = parse_graph("q a 1\n").unwrap();
    let q = g.vertex("q").unwrap();
    let report = solve_sgq(&g, &SgqQuery::new(q, 1, 1, 0)).unwrap();
    let group: &Group = report.solution.as_ref().unwrap();
    let doc = SolutionDocument::new(Problem::Sgq, &g, q, Some((group, None)), report.stats);
    assert_eq!(doc.members, ["q"]);
    assert_eq!(doc.total, Some(0.0));
    assert_eq!(doc.status, Status::Optimal);
    assert_eq!(read_solution(&write_solution(&doc)).unwrap(), doc);
}
