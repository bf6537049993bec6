//! Availability calendars over discrete 1-based time slots, and the pivot-slot
//! machinery used to split the temporal search into independent windows.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive, nonempty range of 1-based slot ids.
#[allow(clippy::len_without_is_empty)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotRange {
    pub start: usize,
    pub end: usize,
}

impl SlotRange {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SlotRange { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn contains(&self, slot: usize) -> bool {
        self.start <= slot && slot <= self.end
    }

    pub fn slots(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    /// Overlap of two ranges, `None` when disjoint.
    pub fn intersect(&self, other: &SlotRange) -> Option<SlotRange> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start <= end).then_some(SlotRange { start, end })
    }
}

/// Per-vertex availability over slots `1..=T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvailabilityTable {
    horizon: usize,
    rows: BTreeMap<String, Vec<bool>>,
}

impl AvailabilityTable {
    pub fn new(horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::input("horizon must be at least one slot"));
        }
        Ok(AvailabilityTable {
            horizon,
            rows: BTreeMap::new(),
        })
    }

    /// Adds or replaces the row of `vertex`; `row[t-1]` is slot `t`.
    pub fn insert(&mut self, vertex: impl Into<String>, row: Vec<bool>) -> Result<()> {
        let vertex = vertex.into();
        if row.len() != self.horizon {
            return Err(Error::input(format!(
                "row for {vertex} has {} slots, expected {}",
                row.len(),
                self.horizon
            )));
        }
        self.rows.insert(vertex, row);
        Ok(())
    }

    pub fn with_row(mut self, vertex: impl Into<String>, row: Vec<bool>) -> Result<Self> {
        self.insert(vertex, row)?;
        Ok(self)
    }

    /// Table in which every listed vertex is available at every slot.
    pub fn all_available<'a>(
        horizon: usize,
        vertices: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self> {
        let mut table = Self::new(horizon)?;
        for v in vertices {
            table.insert(v, vec![true; horizon])?;
        }
        Ok(table)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn row(&self, vertex: &str) -> Option<&[bool]> {
        self.rows.get(vertex).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &[bool])> {
        self.rows.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Availability of `vertex` at 1-based `slot`. Missing rows and slots
    /// outside the horizon read as unavailable.
    pub fn is_available(&self, vertex: &str, slot: usize) -> bool {
        slot >= 1
            && self
                .rows
                .get(vertex)
                .and_then(|r| r.get(slot - 1))
                .copied()
                .unwrap_or(false)
    }
}

/// A pivot slot `i*m` with its search window `[(i-1)m+1, min((i+1)m-1, T)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PivotWindow {
    pub pivot: usize,
    pub window: SlotRange,
}

impl PivotWindow {
    pub fn new(pivot: usize, m: usize, horizon: usize) -> Result<Self> {
        if m == 0 || pivot == 0 || !pivot.is_multiple_of(m) || pivot > horizon {
            return Err(Error::input(format!(
                "slot {pivot} is not a pivot for m={m}, T={horizon}"
            )));
        }
        Ok(PivotWindow {
            pivot,
            window: SlotRange::new(pivot + 1 - m, (pivot + m - 1).min(horizon)),
        })
    }
}

/// Slot ids `m, 2m, 3m, ..` up to `T`. Empty when `m` is zero or exceeds `T`.
pub fn pivot_slots(horizon: usize, m: usize) -> Vec<usize> {
    if m == 0 {
        return Vec::new();
    }
    (1..=horizon / m).map(|i| i * m).collect()
}

/// Maximal available run of a single row around the pivot, within the window.
pub(crate) fn run_around(row: Option<&[bool]>, pw: &PivotWindow) -> Option<SlotRange> {
    let row = row?;
    let avail = |t: usize| row.get(t - 1).copied().unwrap_or(false);
    if !avail(pw.pivot) {
        return None;
    }
    let mut start = pw.pivot;
    while start > pw.window.start && avail(start - 1) {
        start -= 1;
    }
    let mut end = pw.pivot;
    while end < pw.window.end && avail(end + 1) {
        end += 1;
    }
    Some(SlotRange { start, end })
}

/// Longest run of slots inside the pivot window, containing the pivot, in
/// which every member is available. `None` when some member misses the pivot.
pub fn common_run(
    table: &AvailabilityTable,
    members: &[&str],
    pw: &PivotWindow,
) -> Option<SlotRange> {
    members.iter().try_fold(pw.window, |acc, v| {
        run_around(table.row(v), pw).and_then(|r| acc.intersect(&r))
    })
}

/// Whether `v` has at least `m` consecutive available slots in the window.
pub fn has_feasible_run(table: &AvailabilityTable, v: &str, pw: &PivotWindow, m: usize) -> bool {
    run_around(table.row(v), pw).is_some_and(|r| r.len() >= m)
}

/// Closest slots below and above the pivot at which at least `n` candidates
/// are unavailable, scanning inside the window only.
///
/// Returns `(t_minus, t_plus)`. When no such slot exists on a side the
/// one-past-window boundary is used (`window.start - 1`, `window.end + 1`).
pub fn tbar(
    table: &AvailabilityTable,
    candidates: &[&str],
    pw: &PivotWindow,
    n: usize,
) -> (usize, usize) {
    let blocked = |t: usize| {
        candidates
            .iter()
            .filter(|v| !table.is_available(v, t))
            .count()
            >= n
    };
    let below = (pw.window.start..pw.pivot)
        .rev()
        .find(|&t| blocked(t))
        .unwrap_or(pw.window.start - 1);
    let above = (pw.pivot + 1..=pw.window.end)
        .find(|&t| blocked(t))
        .unwrap_or(pw.window.end + 1);
    (below, above)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &str) -> Vec<bool> {
        bits.bytes().map(|b| b == b'1').collect()
    }

    #[test]
    fn pivots_are_multiples_of_m() {
        assert_eq!(pivot_slots(7, 3), vec![3, 6]);
        assert_eq!(pivot_slots(9, 3), vec![3, 6, 9]);
        assert_eq!(pivot_slots(5, 1), vec![1, 2, 3, 4, 5]);
        assert!(pivot_slots(2, 3).is_empty());
    }

    #[test]
    fn windows_are_clipped_at_the_horizon() {
        let pw = PivotWindow::new(6, 3, 7).unwrap();
        assert_eq!(pw.window, SlotRange::new(4, 7));
        let pw = PivotWindow::new(3, 3, 7).unwrap();
        assert_eq!(pw.window, SlotRange::new(1, 5));
        assert!(PivotWindow::new(4, 3, 7).is_err());
    }

    #[test]
    fn common_run_of_fully_available_members() {
        let t = AvailabilityTable::new(7)
            .unwrap()
            .with_row("v2", row("1111100"))
            .unwrap()
            .with_row("v7", row("1111111"))
            .unwrap();
        let pw = PivotWindow::new(3, 3, 7).unwrap();
        let run = common_run(&t, &["v2", "v7"], &pw).unwrap();
        assert_eq!(run, SlotRange::new(1, 5));
        assert_eq!(run.len(), 5);
    }

    #[test]
    fn common_run_is_empty_when_pivot_is_missed() {
        let t = AvailabilityTable::new(6)
            .unwrap()
            .with_row("a", row("111111"))
            .unwrap()
            .with_row("b", row("110111"))
            .unwrap();
        let pw = PivotWindow::new(3, 3, 6).unwrap();
        assert_eq!(common_run(&t, &["a", "b"], &pw), None);
        // missing rows count as unavailable
        assert_eq!(common_run(&t, &["a", "zz"], &pw), None);
    }

    #[test]
    fn feasible_run_needs_m_consecutive_slots() {
        let t = AvailabilityTable::new(9)
            .unwrap()
            .with_row("v", row("000110110"))
            .unwrap()
            .with_row("w", row("111111111"))
            .unwrap();
        let pw = PivotWindow::new(6, 3, 9).unwrap();
        assert_eq!(pw.window, SlotRange::new(4, 8));
        assert!(!has_feasible_run(&t, "v", &pw, 3));
        assert!(has_feasible_run(&t, "w", &pw, 3));
        let pw3 = PivotWindow::new(3, 3, 9).unwrap();
        assert!(!has_feasible_run(&t, "v", &pw3, 3));
    }

    #[test]
    fn tbar_matches_worked_pivot_six() {
        // three candidates, two of them blocked at slots 4 and 7
        let t = AvailabilityTable::new(8)
            .unwrap()
            .with_row("v3", row("11101101"))
            .unwrap()
            .with_row("v6", row("11111111"))
            .unwrap()
            .with_row("v8", row("11101101"))
            .unwrap();
        let pw = PivotWindow::new(6, 3, 8).unwrap();
        assert_eq!(tbar(&t, &["v3", "v6", "v8"], &pw, 2), (4, 7));
    }

    #[test]
    fn tbar_sentinels_when_nothing_is_blocked() {
        let t = AvailabilityTable::all_available(9, ["a", "b"]).unwrap();
        let pw = PivotWindow::new(6, 3, 9).unwrap();
        assert_eq!(tbar(&t, &["a", "b"], &pw, 1), (3, 9));
    }

    #[test]
    fn rows_must_match_horizon() {
        let mut t = AvailabilityTable::new(4).unwrap();
        assert!(t.insert("a", vec![true; 3]).is_err());
        assert!(AvailabilityTable::new(0).is_err());
    }
}
