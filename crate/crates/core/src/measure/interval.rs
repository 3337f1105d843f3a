use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite union of pairwise disjoint closed intervals, kept sorted. Touching or
/// overlapping intervals are merged on insertion, so gaps are strictly positive.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new() -> Self {
        Self::default()
    }

    /// Canonical union of arbitrary intervals.
    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(items: I) -> Result<Self> {
        let mut raw: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in items {
            check(lo, hi)?;
            raw.push((lo, hi));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        Ok(IntervalUnion { intervals: out })
    }

    /// Inserts `[lo, hi]`, merging with every interval it overlaps or touches.
    pub fn insert(&mut self, lo: f64, hi: f64) -> Result<()> {
        check(lo, hi)?;
        // First interval whose right end reaches lo.
        let start = self.intervals.partition_point(|&(_, b)| b < lo);
        let mut end = start;
        let (mut new_lo, mut new_hi) = (lo, hi);
        while end < self.intervals.len() && self.intervals[end].0 <= hi {
            new_lo = new_lo.min(self.intervals[end].0);
            new_hi = new_hi.max(self.intervals[end].1);
            end += 1;
        }
        self.intervals.splice(start..end, std::iter::once((new_lo, new_hi)));
        Ok(())
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).copied())
            .expect("canonical intervals are valid")
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure, summed left to right.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.intervals.partition_point(|&(_, b)| b < x);
        i < self.intervals.len() && self.intervals[i].0 <= x
    }

    /// `E ∩ [lo, hi]`; degenerate pieces are dropped.
    pub fn clip(&self, lo: f64, hi: f64) -> IntervalUnion {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (a < b).then_some((a, b))
            })
            .collect();
        IntervalUnion { intervals }
    }

    /// `E ∩ [r, ∞)`.
    pub fn intersect_ray(&self, r: f64) -> IntervalUnion {
        self.clip(r, f64::INFINITY)
    }

    /// Whether every point of `[lo, hi]` lies in the union.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let i = self.intervals.partition_point(|&(_, b)| b < lo);
        i < self.intervals.len() && self.intervals[i].0 <= lo && self.intervals[i].1 >= hi
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|&(a, b)| other.covers(a, b))
    }
}

fn check(lo: f64, hi: f64) -> Result<()> {
    if !(lo < hi) || lo.is_nan() || hi.is_nan() {
        return Err(Error::InvalidInterval { lo, hi });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_inserts_merge() {
        let mut u = IntervalUnion::new();
        u.insert(0.0, 1.0).unwrap();
        u.insert(0.5, 2.0).unwrap();
        assert_eq!(u.intervals(), &[(0.0, 2.0)]);
        assert_eq!(u.measure(), 2.0);
    }

    #[test]
    fn touching_inserts_merge() {
        let mut u = IntervalUnion::new();
        u.insert(2.0, 3.0).unwrap();
        u.insert(0.0, 1.0).unwrap();
        u.insert(1.0, 2.0).unwrap();
        assert_eq!(u.intervals(), &[(0.0, 3.0)]);
    }

    #[test]
    fn insert_spanning_many() {
        let mut u = IntervalUnion::from_intervals([(0.0, 1.0), (2.0, 3.0), (4.0, 5.0), (7.0, 8.0)]).unwrap();
        u.insert(0.5, 4.5).unwrap();
        assert_eq!(u.intervals(), &[(0.0, 5.0), (7.0, 8.0)]);
        assert!(!u.contains(6.0) && u.contains(7.5));
    }

    #[test]
    fn empty_union_has_zero_measure() {
        assert_eq!(IntervalUnion::new().measure(), 0.0);
    }

    #[test]
    fn invalid_interval() {
        assert!(matches!(IntervalUnion::new().insert(1.0, 1.0), Err(Error::InvalidInterval { .. })));
        assert!(IntervalUnion::from_intervals([(2.0, 1.0)]).is_err());
    }

    #[test]
    fn cantor_cover_measure() {
        let mut u = IntervalUnion::new();
        for (k, level) in crate::disc_sets::cantor_levels(10).iter().enumerate() {
            let r = 3f64.powi(-(k as i32 + 1));
            for &(lo, hi) in level {
                let m = 0.5 * (lo + hi);
                u.insert(m - r, m + r).unwrap();
            }
        }
        assert!((u.measure() - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn clip_and_ray() {
        let u = IntervalUnion::from_intervals([(0.0, 2.0), (3.0, 5.0)]).unwrap();
        assert_eq!(u.intersect_ray(1.0).intervals(), &[(1.0, 2.0), (3.0, 5.0)]);
        assert_eq!(u.clip(2.5, 4.0).intervals(), &[(3.0, 4.0)]);
        assert!(u.clip(6.0, 7.0).is_empty());
        assert!(u.clip(1.0, 4.0).is_subset_of(&u));
        assert!(!u.is_subset_of(&u.clip(1.0, 4.0)));
    }
}
