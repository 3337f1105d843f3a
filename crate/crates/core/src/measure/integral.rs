use serde::{Deserialize, Serialize};

use super::IntervalUnion;
use crate::disc_sets::DiscCollection;
use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge, GaugeClass};
use crate::numeric::adaptive_simpson;

/// Absolute quadrature tolerance per interval.
pub const QUAD_TOL: f64 = 1e-10;
/// Evaluation cap per interval.
pub const QUAD_MAX_EVALS: usize = 1_000_000;
/// Distance from 1 at which unit-disc integrals are truncated.
pub const UNIT_EDGE: f64 = 1e-12;

/// Radial projection `[size-coordinate ± r]` of the discs, clipped to `[1, ∞)` in
/// the plane and `[0, 1]` in the unit disc. The size coordinate is `|z_n|`.
pub fn projection(col: &DiscCollection) -> IntervalUnion {
    projection_of(col.ambient, col.discs.iter().map(|d| (d.modulus(), d.radius)))
}

/// Radial projection of the tail discs only.
pub fn tail_projection(col: &DiscCollection) -> IntervalUnion {
    projection_of(col.ambient, col.tail().iter().map(|d| (d.modulus(), d.radius)))
}

fn projection_of(ambient: Ambient, items: impl Iterator<Item = (f64, f64)>) -> IntervalUnion {
    let (floor, ceil) = match ambient {
        Ambient::Plane => (1.0, f64::INFINITY),
        Ambient::UnitDisc => (0.0, 1.0),
    };
    let pieces = items.filter_map(|(m, r)| {
        let (a, b) = ((m - r).max(floor), (m + r).min(ceil));
        (a < b).then_some((a, b))
    });
    IntervalUnion::from_intervals(pieces).expect("clipped pieces are proper intervals")
}

/// Projection onto the real axis, `[Re z_n - r_n, Re z_n + r_n]`, unclipped.
pub fn vertical_projection(col: &DiscCollection) -> IntervalUnion {
    IntervalUnion::from_intervals(col.discs.iter().map(|d| (d.center.re - d.radius, d.center.re + d.radius)))
        .expect("discs have positive radii")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub value: f64,
    pub per_interval: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
    /// An interval reached the singular endpoint `x = 1` and was truncated at
    /// `1 - 1e-12`; `value` is then a lower bound.
    pub lower_bound: bool,
}

/// `∫_E dx / g(x)` (plane) or `∫_E dx / g(1 - x)` (unit disc), interval by interval.
pub fn gauge_integral(e: &IntervalUnion, gauge: &Gauge) -> Result<IntegralReport> {
    let mut per_interval = Vec::with_capacity(e.len());
    let mut converged = true;
    let mut lower_bound = false;
    let mut evaluations = 0;
    for &(lo, hi) in e.intervals() {
        let q = match gauge.ambient() {
            Ambient::Plane => {
                if !plane_integrable(gauge, lo) {
                    return Err(Error::invalid(format!("interval [{lo}, {hi}] leaves the domain of {gauge}")));
                }
                adaptive_simpson(|x| 1.0 / gauge.value(x), lo, hi, QUAD_TOL, QUAD_MAX_EVALS)
            }
            Ambient::UnitDisc => {
                if lo < 0.0 {
                    return Err(Error::invalid(format!("interval [{lo}, {hi}] leaves [0, 1)")));
                }
                let top = if hi > 1.0 - UNIT_EDGE {
                    lower_bound = true;
                    1.0 - UNIT_EDGE
                } else {
                    hi
                };
                if top <= lo {
                    per_interval.push(0.0);
                    continue;
                }
                adaptive_simpson(|x| 1.0 / gauge.value(1.0 - x), lo, top, QUAD_TOL, QUAD_MAX_EVALS)
            }
        };
        converged &= q.converged;
        evaluations += q.evaluations;
        per_interval.push(q.value);
    }
    Ok(IntegralReport { value: per_interval.iter().sum(), per_interval, converged, evaluations, lower_bound })
}

fn plane_integrable(g: &Gauge, lo: f64) -> bool {
    match g.class() {
        GaugeClass::PlaneConvexDecreasing | GaugeClass::PlaneConstant => lo >= 0.0 && g.in_domain(lo.max(f64::MIN_POSITIVE)),
        _ => g.in_domain(lo) && g.value(lo) > 0.0,
    }
}

/// Head/tail split of the projection integral with the chain bound for the tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionIntegralReport {
    pub head: f64,
    pub tail: f64,
    /// `Σ_tail 2α r_n / K(|z_n|)` (concave), `Σ_tail 2 r_n / (β L(|z_n|))` (convex);
    /// absent for gauges without a stated constant.
    pub tail_bound: Option<f64>,
    pub within_bound: Option<bool>,
}

pub fn projection_integral(col: &DiscCollection) -> Result<ProjectionIntegralReport> {
    let head_col = projection_of(col.ambient, col.discs[..col.tail_index].iter().map(|d| (d.modulus(), d.radius)));
    let head = gauge_integral(&head_col, &col.gauge)?.value;
    let tail = gauge_integral(&tail_projection(col), &col.gauge)?.value;
    let g = &col.gauge;
    let tail_bound = match g.class() {
        GaugeClass::PlaneConcave | GaugeClass::PlaneConstant => {
            let alpha = g.alpha.unwrap_or(2.0);
            Some(col.tail().iter().map(|d| 2.0 * alpha * d.radius / g.value(d.modulus())).sum())
        }
        GaugeClass::PlaneConvexDecreasing => {
            let beta = g.beta.unwrap_or(0.5);
            Some(col.tail().iter().map(|d| 2.0 * d.radius / (beta * g.value(d.modulus()))).sum())
        }
        _ => None,
    };
    let within_bound = tail_bound.map(|b| tail <= b * (1.0 + 1e-9) + QUAD_TOL * col.len() as f64);
    Ok(ProjectionIntegralReport { head, tail, tail_bound, within_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc_sets::{gen_cantor_rset, gen_random, Disc};
    use std::f64::consts::E;

    #[test]
    fn logarithmic_measure_of_e_to_e_squared() {
        let e = IntervalUnion::from_intervals([(E, E * E)]).unwrap();
        let rep = gauge_integral(&e, &Gauge::identity()).unwrap();
        assert!((rep.value - 1.0).abs() < 1e-10);
        assert!(rep.converged);
    }

    #[test]
    fn constant_gauge_gives_length() {
        let e = IntervalUnion::from_intervals([(2.0, 5.0)]).unwrap();
        assert!((gauge_integral(&e, &Gauge::constant()).unwrap().value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_integral_closed_form_and_edge() {
        // ∫_a^b dx/√(1-x) = 2(√(1-a) - √(1-b)).
        let g = Gauge::unit_concave_power(0.5).unwrap();
        let e = IntervalUnion::from_intervals([(0.5, 0.9)]).unwrap();
        let oracle = 2.0 * (0.5f64.sqrt() - 0.1f64.sqrt());
        assert!((gauge_integral(&e, &g).unwrap().value - oracle).abs() < 1e-9);
        let edge = IntervalUnion::from_intervals([(0.9, 1.0)]).unwrap();
        let rep = gauge_integral(&edge, &Gauge::unit_convex_power(2.0).unwrap()).unwrap();
        assert!(rep.lower_bound);
    }

    #[test]
    fn single_disc_projection() {
        let col = DiscCollection::sealed(Ambient::Plane, Gauge::identity(), vec![Disc::at(10.0, 0.0, 1.0).unwrap()], 0)
            .unwrap();
        assert_eq!(projection(&col).intervals(), &[(9.0, 11.0)]);
        let two = vec![Disc::at(10.0, 0.0, 1.0).unwrap(), Disc::at(0.0, 20.0, 0.5).unwrap()];
        let col = DiscCollection::sealed(Ambient::Plane, Gauge::identity(), two, 0).unwrap();
        assert!((projection(&col).measure() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cantor_vertical_projection() {
        let col = gen_cantor_rset(12, None).unwrap();
        assert!((vertical_projection(&col).measure() - 4.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn projection_integral_chain() {
        let col = gen_random(Ambient::Plane, Gauge::concave_power(0.5).unwrap(), 300, 1e-3, 1.0, 3).unwrap();
        let rep = projection_integral(&col).unwrap();
        assert_eq!(rep.within_bound, Some(true), "{rep:?}");
        let col = gen_random(Ambient::Plane, Gauge::convex_power(1.0).unwrap(), 300, 1e-3, 1.0, 3).unwrap();
        assert_eq!(projection_integral(&col).unwrap().within_bound, Some(true));
    }

    #[test]
    fn integral_is_monotone_in_the_set() {
        let g = Gauge::log();
        let small = IntervalUnion::from_intervals([(3.0, 4.0)]).unwrap();
        let big = IntervalUnion::from_intervals([(3.0, 4.0), (6.0, 9.0)]).unwrap();
        assert!(gauge_integral(&small, &g).unwrap().value <= gauge_integral(&big, &g).unwrap().value);
    }

    #[test]
    fn rejects_intervals_outside_domain() {
        let e = IntervalUnion::from_intervals([(0.5, 2.0)]).unwrap();
        assert!(gauge_integral(&e, &Gauge::log()).is_err());
    }
}
