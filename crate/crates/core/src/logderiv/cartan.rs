//! Boutroux–Cartan exceptional discs.
//!
//! Given `μ` points and `d > 0`, returns discs with radii summing to at most `2d`
//! such that for every `z` outside them the `m`-th nearest point is farther than
//! `m·d/μ`.

use serde::Serialize;

use crate::disc_sets::Disc;
use crate::ComplexPoint;

/// Relative shrink of the search radius. Keeps the emitted radii strictly below the
/// `2d` budget after rounding.
const SHRINK: f64 = 1e-9;
const COUNT_TOL: f64 = 1e-12;

/// Greedy construction: repeatedly take the largest `λ` for which a disc of radius
/// `λ·d/μ` holds `λ` remaining points, remove them, and emit that disc dilated by 2.
pub fn cartan_discs(points: &[ComplexPoint], d: f64) -> Vec<Disc> {
    let mu = points.len();
    if mu == 0 || !(d > 0.0) {
        return Vec::new();
    }
    let unit = d / mu as f64;
    let mut remaining: Vec<ComplexPoint> = points.to_vec();
    let mut out = Vec::new();
    let mut lambda = mu;
    while !remaining.is_empty() {
        lambda = lambda.min(remaining.len());
        let (center, taken) = loop {
            let rho = lambda as f64 * unit * (1.0 - SHRINK);
            let (center, count) = densest_disc(&remaining, rho);
            if count >= lambda {
                break (center, lambda);
            }
            // Counts only shrink with the radius, so every λ' in (count, λ) fails too.
            lambda = count.min(lambda - 1).max(1);
        };
        let rho = lambda as f64 * unit * (1.0 - SHRINK);
        let mut by_dist: Vec<(f64, usize)> =
            remaining.iter().enumerate().map(|(i, p)| ((p - center).norm(), i)).collect();
        by_dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        let chosen: Vec<usize> = by_dist[..taken].iter().map(|&(_, i)| i).collect();
        let reach = by_dist[taken - 1].0;
        let radius = rho + reach.max(f64::MIN_POSITIVE);
        out.push(Disc { center, radius });
        let mut keep = vec![true; remaining.len()];
        for i in chosen {
            keep[i] = false;
        }
        let mut it = keep.iter();
        remaining.retain(|_| *it.next().unwrap());
    }
    out
}

/// Center of a closed disc of radius `rho` holding the most points, and that count.
/// Angular sweep over circles through each point, plus discs centered at points.
fn densest_disc(points: &[ComplexPoint], rho: f64) -> (ComplexPoint, usize) {
    let count_at = |c: ComplexPoint| points.iter().filter(|p| (*p - c).norm() <= rho * (1.0 + COUNT_TOL)).count();
    let mut best = (points[0], count_at(points[0]));
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * points.len());
    for (i, &p) in points.iter().enumerate() {
        events.clear();
        for (k, &q) in points.iter().enumerate() {
            if k == i {
                continue;
            }
            let delta = (q - p).norm();
            if delta == 0.0 || delta > 2.0 * rho {
                continue;
            }
            let theta = (q - p).arg();
            let phi = (delta / (2.0 * rho)).min(1.0).acos();
            let (lo, hi) = (theta - phi, theta + phi);
            events.push((lo, 1));
            events.push((hi, -1));
            // Wrap the arc so the sweep over (-π - φ, π + φ) sees it once per turn.
            events.push((lo + std::f64::consts::TAU, 1));
            events.push((hi + std::f64::consts::TAU, -1));
        }
        if events.is_empty() {
            continue;
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut depth = 0;
        let mut top = (0, 0.0);
        for &(angle, step) in &events {
            depth += step;
            if depth > top.0 {
                top = (depth, angle);
            }
        }
        let center = p + ComplexPoint::from_polar(rho, top.1);
        let count = count_at(center);
        if count > best.1 {
            best = (center, count);
        }
        if best.1 == points.len() {
            break;
        }
    }
    let (c, n) = best;
    if n == 0 {
        (points[0], 1)
    } else {
        (c, n)
    }
}

/// Verification of the two guarantees on a set of sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CartanCheck {
    pub mu: usize,
    pub d: f64,
    pub disc_count: usize,
    pub radii_sum: f64,
    pub radii_ok: bool,
    pub samples: usize,
    pub outside: usize,
    /// Sample indices where some `dist_(m) <= m·d/μ`.
    pub violations: Vec<usize>,
}

impl CartanCheck {
    pub fn pass(&self) -> bool {
        self.radii_ok && self.violations.is_empty()
    }
}

/// Checks `Σ radii <= 2d` and the sorted-distance guarantee at every sample outside
/// the discs.
pub fn check_cartan(points: &[ComplexPoint], d: f64, discs: &[Disc], samples: &[ComplexPoint]) -> CartanCheck {
    let mu = points.len();
    let radii_sum: f64 = discs.iter().map(|c| c.radius).sum();
    let mut outside = 0;
    let mut violations = Vec::new();
    let mut dist = Vec::with_capacity(mu);
    for (idx, &z) in samples.iter().enumerate() {
        if discs.iter().any(|c| c.contains(z)) {
            continue;
        }
        outside += 1;
        dist.clear();
        dist.extend(points.iter().map(|p| (z - p).norm()));
        dist.sort_by(f64::total_cmp);
        let bad = dist.iter().enumerate().any(|(m, &r)| r <= (m + 1) as f64 * d / mu as f64);
        if bad {
            violations.push(idx);
        }
    }
    CartanCheck {
        mu,
        d,
        disc_count: discs.len(),
        radii_sum,
        radii_ok: radii_sum <= 2.0 * d,
        samples: samples.len(),
        outside,
        violations,
    }
}
