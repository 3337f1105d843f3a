//! Avoiding exceptional sets with a shrinking dilation.
//!
//! If `g <= h` off `E`, then `g(r) <= h((1 + ε(r))·r)` (plane) or `g(r) <= h(s(r))`
//! with `s(r) = 1 - b(r)(1 - r)` (unit disc) beyond some `R`, provided the density
//! of `E` relative to `ε` or `b` is small.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge, GaugeClass, GaugeKind};
use crate::measure::density::tail_integrals;
use crate::measure::{gauge_integral, IntervalUnion};

/// Nondecreasing function sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneSample {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl MonotoneSample {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.is_empty() || grid.len() != values.len() {
            return Err(Error::invalid("monotone sample needs equally long, non-empty grid and values"));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("monotone sample grid must be strictly increasing"));
        }
        if values.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::invalid("monotone sample values must be nondecreasing"));
        }
        Ok(MonotoneSample { grid, values })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at the largest grid point `<= x`; a lower bound for the sampled function.
    /// `-∞` left of the grid.
    pub fn lower(&self, x: f64) -> f64 {
        match self.grid.partition_point(|&t| t <= x) {
            0 => f64::NEG_INFINITY,
            i => self.values[i - 1],
        }
    }

    /// Value at the smallest grid point `>= x`; an upper bound. `+∞` right of the grid.
    pub fn upper(&self, x: f64) -> f64 {
        let i = self.grid.partition_point(|&t| t < x);
        self.values.get(i).copied().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `g(r) > h(dilated r)`.
    Bound,
    /// `[r, dilated r] ⊂ E`.
    Covered,
    /// The chain bounding `∫_r^{dilated r}` from below failed.
    IntervalStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvoidanceViolation {
    pub r: f64,
    pub kind: ViolationKind,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AvoidanceReport {
    /// Grid witness for the threshold; the true threshold may be smaller.
    #[serde(rename = "R")]
    pub r_threshold: f64,
    pub violations: Vec<AvoidanceViolation>,
    /// `(r, density ratio)` over the grid.
    pub density_trajectory: Vec<(f64, f64)>,
    pub density_limsup: f64,
    /// Grid points `>= R` that were checked.
    pub checked: usize,
}

impl AvoidanceReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_precondition(g: &MonotoneSample, h: &MonotoneSample, e: &IntervalUnion) -> Result<()> {
    for (&r, &gv) in g.grid.iter().zip(&g.values) {
        if !e.contains(r) && gv > h.lower(r) {
            return Err(Error::PreconditionFail(format!("g({r}) = {gv} exceeds h({r}) off E")));
        }
    }
    Ok(())
}

/// Index of the first grid point from which `ok` holds up to the end of the grid.
fn threshold_index(ok: &[bool]) -> Option<usize> {
    let tail = ok.iter().rev().take_while(|&&b| b).count();
    (tail > 0).then(|| ok.len() - tail)
}

fn plane_admissible(gauge: &Gauge, grid: &[f64]) -> bool {
    match gauge.kind {
        GaugeKind::PlaneConstant | GaugeKind::PlaneConcaveIdentity => true,
        _ => {
            gauge.class() == GaugeClass::PlaneConcave
                && grid.iter().filter(|&&x| x >= gauge.r_threshold).all(|&x| {
                    let k = gauge.value(x);
                    (1.0..=x).contains(&k)
                })
        }
    }
}

/// Plane avoidance check on the grid of `g`.
///
/// `R` is the first grid point from which `ε(r) > α·(K(r)/r)·∫_{E∩[r,∞)} dx/K` holds
/// on the rest of the grid (and the doubling condition applies). Beyond `R` the
/// report checks `g(r) <= h((1+ε(r))r)`, `[r, (1+ε(r))r] ⊄ E` and
/// `∫_r^{(1+ε)r} dx/K >= ε r/K((1+ε)r) >= ε r/(α K(r)) > ∫_{E∩[r,∞)} dx/K`.
/// `h` is read through its lower step interpolation.
pub fn avoidance_check_plane(
    g: &MonotoneSample,
    h: &MonotoneSample,
    e: &IntervalUnion,
    gauge: &Gauge,
    eps_profile: &dyn Fn(f64) -> f64,
    alpha: f64,
) -> Result<AvoidanceReport> {
    if gauge.ambient() != Ambient::Plane || !plane_admissible(gauge, g.grid()) {
        return Err(Error::UnsupportedGauge(gauge.to_string()));
    }
    if !(alpha > 0.0) || gauge.alpha.is_some_and(|a| a > alpha) {
        return Err(Error::PreconditionFail(format!("alpha {alpha} is not a doubling constant of {gauge}")));
    }
    if g.grid[0] < 1.0 || e.intervals().first().is_some_and(|iv| iv.0 < 1.0) {
        return Err(Error::invalid("plane avoidance lives on [1, ∞)"));
    }
    check_precondition(g, h, e)?;
    let grid = g.grid();
    let tails = tail_integrals(e, gauge, grid)?;
    let mut eps = Vec::with_capacity(grid.len());
    for &r in grid {
        let v = eps_profile(r);
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::invalid(format!("ε({r}) = {v} not in (0, 1]")));
        }
        eps.push(v);
    }
    let ratios: Vec<f64> =
        grid.iter().zip(&tails).zip(&eps).map(|((&r, &t), &ep)| gauge.value(r) / r * t / ep).collect();
    let limsup = decade_max(grid, &ratios, |r| r >= grid[grid.len() - 1] / 10.0);
    if limsup >= 1.0 / alpha {
        return Err(Error::HypothesisFail(format!("K-density estimate {limsup} is not below 1/α = {}", 1.0 / alpha)));
    }
    let ok: Vec<bool> = grid
        .iter()
        .zip(&ratios)
        .map(|(&r, &q)| r >= gauge.r_threshold && q * alpha < 1.0)
        .collect();
    let start = threshold_index(&ok).ok_or_else(|| Error::HypothesisFail("density threshold never reached".into()))?;

    let mut violations = Vec::new();
    for i in start..grid.len() {
        let (r, ep, tail) = (grid[i], eps[i], tails[i]);
        let x = (1.0 + ep) * r;
        let (gv, hv) = (g.values[i], h.lower(x));
        if gv > hv {
            violations.push(AvoidanceViolation { r, kind: ViolationKind::Bound, lhs: gv, rhs: hv });
        }
        if e.covers(r, x) {
            violations.push(AvoidanceViolation { r, kind: ViolationKind::Covered, lhs: r, rhs: x });
        }
        let span = gauge_integral(&IntervalUnion::from_intervals([(r, x)])?, gauge)?.value;
        let chain = [span, ep * r / gauge.value(x), ep * r / (alpha * gauge.value(r))];
        let tol = 1e-9 * chain[0];
        if !(chain[0] + tol >= chain[1] && chain[1] + tol >= chain[2] && chain[2] > tail) {
            violations.push(AvoidanceViolation { r, kind: ViolationKind::IntervalStep, lhs: chain[2], rhs: tail });
        }
    }
    Ok(AvoidanceReport {
        r_threshold: grid[start],
        violations,
        density_trajectory: grid.iter().copied().zip(ratios).collect(),
        density_limsup: limsup,
        checked: grid.len() - start,
    })
}

/// Unit-disc avoidance check on the grid of `g`.
///
/// `R` is the first grid point from which the density ratio
/// `(k(1-r)/(1-r))·∫_{E∩[r,1)} dx/k(1-x) / (1 - b(r))` stays below 1. Beyond `R` the
/// report checks `g(r) <= h(s(r))`, `[r, s(r)] ⊄ E` and
/// `∫_r^{s(r)} dx/k(1-x) >= (1-b)(1-r)/k(1-r) > ∫_{E∩[r,1)} dx/k(1-x)`.
pub fn avoidance_check_unitdisc(
    g: &MonotoneSample,
    h: &MonotoneSample,
    e: &IntervalUnion,
    gauge: &Gauge,
    b_profile: &dyn Fn(f64) -> f64,
) -> Result<AvoidanceReport> {
    let admissible = matches!(gauge.kind, GaugeKind::UnitStolzPower { gamma } if gamma == 1.0)
        || gauge.class() == GaugeClass::UnitConvex;
    if !admissible {
        return Err(Error::UnsupportedGauge(gauge.to_string()));
    }
    let grid = g.grid();
    if grid[0] < 0.0 || grid[grid.len() - 1] >= 1.0 {
        return Err(Error::invalid("unit avoidance grid must lie in [0, 1)"));
    }
    check_precondition(g, h, e)?;
    let tails = tail_integrals(e, gauge, grid)?;
    let mut bs = Vec::with_capacity(grid.len());
    for &r in grid {
        let v = b_profile(r);
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::invalid(format!("b({r}) = {v} not in (0, 1)")));
        }
        bs.push(v);
    }
    let ratios: Vec<f64> = grid
        .iter()
        .zip(&tails)
        .zip(&bs)
        .map(|((&r, &t), &b)| {
            let u = 1.0 - r;
            gauge.value(u) / u * t / (1.0 - b)
        })
        .collect();
    let last_gap = 1.0 - grid[grid.len() - 1];
    let limsup = decade_max(grid, &ratios, |r| 1.0 - r <= 10.0 * last_gap);
    if limsup >= 1.0 {
        return Err(Error::HypothesisFail(format!("k-density estimate {limsup} is not below 1")));
    }
    let ok: Vec<bool> = ratios.iter().map(|&q| q < 1.0).collect();
    let start = threshold_index(&ok).ok_or_else(|| Error::HypothesisFail("density threshold never reached".into()))?;

    let mut violations = Vec::new();
    for i in start..grid.len() {
        let (r, b, tail) = (grid[i], bs[i], tails[i]);
        let u = 1.0 - r;
        let s = 1.0 - b * u;
        let (gv, hv) = (g.values[i], h.lower(s));
        if gv > hv {
            violations.push(AvoidanceViolation { r, kind: ViolationKind::Bound, lhs: gv, rhs: hv });
        }
        if e.covers(r, s) {
            violations.push(AvoidanceViolation { r, kind: ViolationKind::Covered, lhs: r, rhs: s });
        }
        let span = gauge_integral(&IntervalUnion::from_intervals([(r, s)])?, gauge)?.value;
        let lower = (1.0 - b) * u / gauge.value(u);
        if !(span * (1.0 + 1e-9) >= lower && lower > tail) {
            violations.push(AvoidanceViolation { r, kind: ViolationKind::IntervalStep, lhs: lower, rhs: tail });
        }
    }
    Ok(AvoidanceReport {
        r_threshold: grid[start],
        violations,
        density_trajectory: grid.iter().copied().zip(ratios).collect(),
        density_limsup: limsup,
        checked: grid.len() - start,
    })
}

fn decade_max(grid: &[f64], values: &[f64], in_decade: impl Fn(f64) -> bool) -> f64 {
    grid.iter().zip(values).filter(|(r, _)| in_decade(**r)).map(|(_, v)| *v).fold(0.0, f64::max)
}

/// Step function that jumps to the right end of the `E`-interval containing `r`:
/// equals `r` off `E` and exceeds it inside. Nondecreasing.
pub fn right_end_profile(e: &IntervalUnion, r: f64) -> f64 {
    let iv = e.intervals();
    let i = iv.partition_point(|&(_, hi)| hi < r);
    match iv.get(i) {
        Some(&(lo, hi)) if lo <= r => hi,
        _ => r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::log_grid;

    fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn empty_set_passes_from_grid_start() {
        let grid = log_grid(1.0, 1e4, 200);
        let g = MonotoneSample::from_fn(grid.clone(), |r| r.sqrt()).unwrap();
        let h = MonotoneSample::from_fn(grid.clone(), |r| r.sqrt()).unwrap();
        let rep = avoidance_check_plane(&g, &h, &IntervalUnion::new(), &Gauge::identity(), &|r| 1.0 / r, 2.0).unwrap();
        assert_eq!(rep.r_threshold, grid[0]);
        assert!(rep.pass());
    }

    #[test]
    fn constant_gauge_single_interval() {
        let e = IntervalUnion::from_intervals([(2.0, 3.0)]).unwrap();
        let mut grid = uniform(1.0, 10.0, 9001);
        grid.extend(log_grid(10.0, 1e3, 200).into_iter().skip(1));
        let g = MonotoneSample::from_fn(grid.clone(), |r| right_end_profile(&e, r)).unwrap();
        let h = MonotoneSample::from_fn(grid.clone(), |r| r).unwrap();
        let rep = avoidance_check_plane(&g, &h, &e, &Gauge::constant(), &|r| 1.0 / r, 1.0).unwrap();
        // tail(r) = clamp(3 - r, 0, 1) < 1 exactly when r > 2.
        let oracle = grid.iter().copied().find(|&r| r > 2.0).unwrap();
        assert_eq!(rep.r_threshold, oracle);
        assert!(rep.pass(), "{:?}", &rep.violations[..rep.violations.len().min(3)]);
        for &(r, q) in &rep.density_trajectory {
            assert!((q - (3.0 - r).clamp(0.0, 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn broken_hypothesis_rejected() {
        let grid = uniform(1.0, 10.0, 100);
        let g = MonotoneSample::from_fn(grid.clone(), |r| r + 1.0).unwrap();
        let h = MonotoneSample::from_fn(grid.clone(), |r| r).unwrap();
        let r = avoidance_check_plane(&g, &h, &IntervalUnion::new(), &Gauge::constant(), &|r| 1.0 / r, 1.0);
        assert!(matches!(r, Err(Error::PreconditionFail(_))));
    }

    #[test]
    fn dense_set_fails_density_hypothesis() {
        let e = IntervalUnion::from_intervals((1..100).map(|n| (n as f64, n as f64 + 0.5))).unwrap();
        let grid = uniform(1.0, 99.0, 500);
        let g = MonotoneSample::from_fn(grid.clone(), |r| r).unwrap();
        let r = avoidance_check_plane(&g, &g, &e, &Gauge::constant(), &|r| 1.0 / r, 1.0);
        assert!(matches!(r, Err(Error::HypothesisFail(_))));
    }

    #[test]
    fn unit_empty_set_passes() {
        let grid = crate::numeric::grid_toward_one(1e-8, 0.9, 300);
        let g = MonotoneSample::from_fn(grid.clone(), |r| r).unwrap();
        let g = MonotoneSample::new(grid.clone(), g.values().to_vec()).unwrap();
        let rep =
            avoidance_check_unitdisc(&g, &g, &IntervalUnion::new(), &Gauge::unit_stolz_power(1.0).unwrap(), &|_| 0.5)
                .unwrap();
        assert_eq!(rep.r_threshold, grid[0]);
        assert!(rep.pass());
    }

    #[test]
    fn interpolation_bounds() {
        let s = MonotoneSample::new(vec![1.0, 2.0, 3.0], vec![10.0, 20.0, 30.0]).unwrap();
        assert_eq!(s.lower(2.5), 20.0);
        assert_eq!(s.upper(2.5), 30.0);
        assert_eq!(s.lower(0.5), f64::NEG_INFINITY);
        assert_eq!(s.upper(4.0), f64::INFINITY);
        assert!(MonotoneSample::new(vec![1.0, 2.0], vec![2.0, 1.0]).is_err());
    }
}
