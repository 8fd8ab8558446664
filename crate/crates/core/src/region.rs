//! Admissible value sets for a single feature.
//!
//! A categorical region is a subset of the feature's value indices. A numeric
//! region is a finite union of half-open intervals `[lo, hi)` over the
//! extended real line, kept sorted, disjoint and merged so that two regions
//! describing the same set compare equal.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dataset::Value;

/// Half-open interval `[lo, hi)`. Infinite bounds are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }
}

/// Canonical union of disjoint half-open intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            intervals: vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    /// Builds a canonical set from arbitrary (possibly overlapping) intervals.
    pub fn from_intervals(items: impl IntoIterator<Item = Interval>) -> Self {
        let mut items: Vec<Interval> = items
            .into_iter()
            .filter(|i| !i.is_empty() && !i.lo.is_nan() && !i.hi.is_nan())
            .collect();
        items.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
        for next in items {
            match merged.last_mut() {
                // touching intervals merge: [a, b) + [b, c) = [a, c)
                Some(last) if next.lo <= last.hi => {
                    if next.hi > last.hi {
                        last.hi = next.hi;
                    }
                }
                _ => merged.push(next),
            }
        }
        IntervalSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_full(&self) -> bool {
        matches!(self.intervals.as_slice(), [i] if i.lo == f64::NEG_INFINITY && i.hi == f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        // intervals are sorted; find the last one starting at or before x
        let idx = self.intervals.partition_point(|i| i.lo <= x);
        idx > 0 && self.intervals[idx - 1].contains(x)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = f64::NEG_INFINITY;
        for i in &self.intervals {
            if i.lo > cursor {
                out.push(Interval::new(cursor, i.lo));
            }
            cursor = i.hi;
        }
        if cursor < f64::INFINITY {
            out.push(Interval::new(cursor, f64::INFINITY));
        }
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        IntervalSet::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo < hi {
                out.push(Interval::new(lo, hi));
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.intersect(other) == *self
    }
}

/// Value set for one feature, categorical or numeric.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Subset of value indices of a categorical domain of `size` values.
    Values {
        members: BTreeSet<u32>,
        size: u32,
    },
    Intervals(IntervalSet),
}

impl Region {
    pub fn values(size: u32, members: impl IntoIterator<Item = u32>) -> Self {
        let members: BTreeSet<u32> = members.into_iter().filter(|&v| v < size).collect();
        Region::Values { members, size }
    }

    pub fn all_values(size: u32) -> Self {
        Region::values(size, 0..size)
    }

    /// `x < threshold`
    pub fn below(threshold: f64) -> Self {
        Region::Intervals(IntervalSet::from_intervals([Interval::new(
            f64::NEG_INFINITY,
            threshold,
        )]))
    }

    pub fn real_line() -> Self {
        Region::Intervals(IntervalSet::full())
    }

    pub fn is_categorical(&self) -> bool {
        matches!(self, Region::Values { .. })
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Values { members, .. } => members.is_empty(),
            Region::Intervals(set) => set.is_empty(),
        }
    }

    /// True when the region is the whole domain of its feature.
    pub fn is_full(&self) -> bool {
        match self {
            Region::Values { members, size } => members.len() == *size as usize,
            Region::Intervals(set) => set.is_full(),
        }
    }

    pub fn contains(&self, value: &Value) -> bool {
        match (self, value) {
            (Region::Values { members, .. }, Value::Cat(v)) => members.contains(v),
            (Region::Intervals(set), Value::Num(x)) => set.contains(*x),
            _ => false,
        }
    }

    pub fn complement(&self) -> Region {
        match self {
            Region::Values { members, size } => Region::Values {
                members: (0..*size).filter(|v| !members.contains(v)).collect(),
                size: *size,
            },
            Region::Intervals(set) => Region::Intervals(set.complement()),
        }
    }

    /// # Panics
    /// When the two regions belong to different kinds of domain.
    pub fn intersect(&self, other: &Region) -> Region {
        match (self, other) {
            (Region::Values { members: a, size }, Region::Values { members: b, .. }) => {
                Region::Values {
                    members: a.intersection(b).copied().collect(),
                    size: *size,
                }
            }
            (Region::Intervals(a), Region::Intervals(b)) => Region::Intervals(a.intersect(b)),
            _ => panic!("region kind mismatch"),
        }
    }

    /// # Panics
    /// When the two regions belong to different kinds of domain.
    pub fn union(&self, other: &Region) -> Region {
        match (self, other) {
            (Region::Values { members: a, size }, Region::Values { members: b, .. }) => {
                Region::Values {
                    members: a.union(b).copied().collect(),
                    size: *size,
                }
            }
            (Region::Intervals(a), Region::Intervals(b)) => Region::Intervals(a.union(b)),
            _ => panic!("region kind mismatch"),
        }
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::Values { members: a, .. }, Region::Values { members: b, .. }) => {
                a.is_subset(b)
            }
            (Region::Intervals(a), Region::Intervals(b)) => a.is_subset(b),
            _ => false,
        }
    }
}

fn fmt_bound(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|i| format!("[{}, {})", fmt_bound(i.lo), fmt_bound(i.hi)))
            .collect();
        write!(f, "{}", parts.join(" u "))
    }
}
