use proptest::prelude::*;
use stgq_core::{
    common_run, has_feasible_run, pivot_slots, tbar, AvailabilityTable, PivotWindow, SlotRange,
};

const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

fn table_strategy() -> impl Strategy<Value = (usize, AvailabilityTable)> {
    (1usize..=20).prop_flat_map(|horizon| {
        proptest::collection::vec(
            proptest::collection::vec(any::<bool>(), horizon),
            NAMES.len(),
        )
        .prop_map(move |rows| {
            let mut t = AvailabilityTable::new(horizon).unwrap();
            for (name, row) in NAMES.iter().zip(rows) {
                t.insert(*name, row).unwrap();
            }
            (horizon, t)
        })
    })
}

/// Longest run of slots around the pivot, inside the window, at which every
/// member is free.
fn naive_run(table: &AvailabilityTable, members: &[&str], pw: &PivotWindow) -> Option<SlotRange> {
    let free = |t: usize| members.iter().all(|v| table.is_available(v, t));
    if !free(pw.pivot) {
        return None;
    }
    let mut lo = pw.pivot;
    while lo > pw.window.start && free(lo - 1) {
        lo -= 1;
    }
    let mut hi = pw.pivot;
    while hi < pw.window.end && free(hi + 1) {
        hi += 1;
    }
    Some(SlotRange::new(lo, hi))
}

proptest! {
    #[test]
    fn common_run_matches_expansion((horizon, table) in table_strategy(), m in 1usize..=5, mask in 1u8..32) {
        let members: Vec<&str> = NAMES.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();
        for pivot in pivot_slots(horizon, m) {
            let pw = PivotWindow::new(pivot, m, horizon).unwrap();
            prop_assert_eq!(common_run(&table, &members, &pw), naive_run(&table, &members, &pw));
            for v in &members {
                let run = naive_run(&table, &[v], &pw);
                prop_assert_eq!(has_feasible_run(&table, v, &pw, m), run.is_some_and(|r| r.len() >= m));
            }
        }
    }

    #[test]
    fn tbar_is_the_nearest_crowded_slot((horizon, table) in table_strategy(), m in 1usize..=5, n in 1usize..=5) {
        for pivot in pivot_slots(horizon, m) {
            let pw = PivotWindow::new(pivot, m, horizon).unwrap();
            let (below, above) = tbar(&table, &NAMES, &pw, n);
            let crowded = |t: usize| NAMES.iter().filter(|v| !table.is_available(v, t)).count() >= n;
            prop_assert!(below < pivot && above > pivot);
            prop_assert!(below + 1 >= pw.window.start && above <= pw.window.end + 1);
            for t in below + 1..above {
                prop_assert!(t == pivot || !crowded(t));
            }
            if below >= pw.window.start {
                prop_assert!(crowded(below));
            }
            if above <= pw.window.end {
                prop_assert!(crowded(above));
            }
        }
    }

    #[test]
    fn every_feasible_period_is_seen_by_exactly_one_pivot(horizon in 1usize..=40, m in 1usize..=8) {
        let pivots = pivot_slots(horizon, m);
        for t in 1..=(horizon + 1).saturating_sub(m) {
            let period = SlotRange::new(t, t + m - 1);
            let hits: Vec<usize> = pivots.iter().copied().filter(|&x| period.contains(x)).collect();
            prop_assert_eq!(hits.len(), 1);
            let pw = PivotWindow::new(hits[0], m, horizon).unwrap();
            prop_assert!(pw.window.start <= period.start && period.end <= pw.window.end);
        }
    }
}
