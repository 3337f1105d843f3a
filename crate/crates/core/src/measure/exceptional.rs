use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::IntervalUnion;
use crate::curve_geometry::{c_intervals, envelope_n, meets, Branch, CIntervalReport, CurveFamily};
use crate::disc_sets::DiscCollection;
use crate::error::{Error, Result};
use crate::gauges::{Ambient, GaugeClass, GaugeKind};
use crate::ComplexPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureBoundKind {
    /// `4 α^{N+1} ε`.
    Concave,
    /// `(4/β) ε`.
    Convex,
    /// `(4 + 2K) ε`.
    Stolz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub union: IntervalUnion,
    pub measure: f64,
    /// Sum of the tail c-interval widths; always an upper bound for `measure`.
    pub width_sum: f64,
    pub bound: Option<f64>,
    pub bound_kind: Option<MeasureBoundKind>,
    pub within_bound: Option<bool>,
    /// Envelope exponent `N` from the tail slope envelope (concave case).
    pub envelope_n: Option<u32>,
    pub intervals: Vec<CIntervalReport>,
    /// Tail discs whose per-disc width exceeded their paper bound.
    pub per_disc_violations: Vec<usize>,
    /// Tail discs excluded because c_interval preconditions failed.
    pub excluded: Vec<usize>,
    pub partial: bool,
}

/// Union of the tail c-intervals and its comparison with the measure bound.
pub fn exceptional_c_measure(col: &DiscCollection, angle: f64) -> Result<ExceptionalReport> {
    let reports = c_intervals(col, angle);
    let mut union = IntervalUnion::new();
    let mut intervals = Vec::new();
    let mut excluded = Vec::new();
    let mut per_disc_violations = Vec::new();
    let mut width_sum = 0.0;
    for (i, rep) in reports.into_iter().enumerate().skip(col.tail_index) {
        match rep {
            Ok(rep) => {
                if !rep.empty && rep.width > 0.0 {
                    union.insert(rep.c_lo, rep.c_hi)?;
                }
                if !rep.satisfied {
                    per_disc_violations.push(i);
                }
                width_sum += rep.width;
                intervals.push(rep);
            }
            Err(Error::PartialDomain { index }) => excluded.push(index),
            Err(e) => return Err(e),
        }
    }
    let measure = union.measure();
    let g = &col.gauge;
    let eps = col.epsilon;
    let frame = ComplexPoint::from_polar(1.0, -angle);
    let (bound, kind, n_env) = match (g.class(), g.kind) {
        (GaugeClass::PlaneConcave | GaugeClass::PlaneConstant, _) => {
            let m = col
                .tail()
                .iter()
                .map(|d| {
                    let w = d.center * frame;
                    w.im.abs() / w.re
                })
                .fold(0.0, f64::max);
            let n = envelope_n(m);
            let alpha = g.alpha.unwrap_or(2.0);
            (Some(4.0 * alpha.powi(n as i32 + 1) * eps), Some(MeasureBoundKind::Concave), Some(n))
        }
        (GaugeClass::PlaneConvexDecreasing, _) => {
            let beta = g.beta.unwrap_or(0.5);
            (Some(4.0 / beta * eps), Some(MeasureBoundKind::Convex), None)
        }
        (_, GaugeKind::UnitStolzPower { gamma }) => {
            let k = crate::curve_geometry::certified_stolz_constant(gamma, &col.discs, angle);
            (Some((4.0 + 2.0 * k) * eps), Some(MeasureBoundKind::Stolz), None)
        }
        _ => (None, None, None),
    };
    Ok(ExceptionalReport {
        within_bound: bound.map(|b| measure <= b),
        partial: !excluded.is_empty(),
        union,
        measure,
        width_sum,
        bound,
        bound_kind: kind,
        envelope_n: n_env,
        intervals,
        per_disc_violations,
        excluded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitReport {
    pub seed: u64,
    pub samples: usize,
    pub c_range: (f64, f64),
    pub hits: usize,
    pub fraction: f64,
    /// `p = exceptional measure / (hi - lo)`.
    pub bound_ratio: f64,
    /// `3 √(p(1-p)/samples)`.
    pub slack: f64,
    pub pass: bool,
}

/// Fraction of uniformly sampled `c` whose curve meets at least one tail disc,
/// decided by [`meets`] (upper branch in the plane, both branches in the unit disc).
///
/// The `c` values are drawn sequentially from the seed and evaluated in parallel, so
/// the report does not depend on the thread count.
pub fn monte_carlo_hits(
    col: &DiscCollection,
    angle: f64,
    c_range: (f64, f64),
    samples: usize,
    exceptional_measure: f64,
    seed: u64,
) -> Result<HitReport> {
    let (lo, hi) = c_range;
    if !(samples >= 1) {
        return Err(Error::invalid("samples must be at least 1"));
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs: Vec<f64> = (0..samples).map(|_| rng.gen_range(lo..hi)).collect();
    let template = match col.ambient {
        Ambient::Plane => CurveFamily::plane(col.gauge, angle, 1.0, Branch::Upper)?,
        Ambient::UnitDisc => CurveFamily::unit(col.gauge, ComplexPoint::from_polar(1.0, angle), 1.0, Branch::Both)?,
    };
    let tail = col.tail();
    let hits = cs
        .par_iter()
        .filter(|&&c| {
            let fam = template.with_c(c);
            tail.iter().any(|d| meets(&fam, d))
        })
        .count();
    let fraction = hits as f64 / samples as f64;
    let p = (exceptional_measure / (hi - lo)).min(1.0);
    let slack = 3.0 * (p * (1.0 - p) / samples as f64).sqrt();
    Ok(HitReport {
        seed,
        samples,
        c_range,
        hits,
        fraction,
        bound_ratio: p,
        slack,
        pass: fraction <= p + slack,
    })
}
