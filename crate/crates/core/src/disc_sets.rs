//! Finite truncations of gauge-weighted disc collections and their generators.
//!
//! An infinite collection is represented by its first discs plus a declared tail
//! budget: `Σ_{n >= N(ε)} r_n / gauge(size_n) < ε`, where `size_n = |z_n|` in the
//! plane and `1 - |z_n|` in the unit disc.

use std::f64::consts::E;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge, GaugeClass};
use crate::ComplexPoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscRecord", into = "DiscRecord")]
pub struct Disc {
    pub center: ComplexPoint,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct DiscRecord {
    re: f64,
    im: f64,
    r: f64,
}

impl From<Disc> for DiscRecord {
    fn from(d: Disc) -> Self {
        DiscRecord { re: d.center.re, im: d.center.im, r: d.radius }
    }
}

impl TryFrom<DiscRecord> for Disc {
    type Error = Error;
    fn try_from(rec: DiscRecord) -> Result<Self> {
        Disc::new(ComplexPoint::new(rec.re, rec.im), rec.r)
    }
}

impl Disc {
    pub fn new(center: ComplexPoint, radius: f64) -> Result<Self> {
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::invalid("disc center must be finite"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("disc radius {radius} must be positive and finite")));
        }
        Ok(Disc { center, radius })
    }

    pub fn at(re: f64, im: f64, radius: f64) -> Result<Self> {
        Self::new(ComplexPoint::new(re, im), radius)
    }

    /// Closed-disc membership.
    pub fn contains(&self, z: ComplexPoint) -> bool {
        (z - self.center).norm() <= self.radius
    }

    pub fn modulus(&self) -> f64 {
        self.center.norm()
    }

    /// `|z_n|` in the plane, `1 - |z_n|` in the unit disc.
    pub fn size(&self, ambient: Ambient) -> f64 {
        match ambient {
            Ambient::Plane => self.modulus(),
            Ambient::UnitDisc => 1.0 - self.modulus(),
        }
    }

    /// Disc rotated by `e^{-iφ}` about the origin.
    pub fn rotated(&self, phi: f64) -> Disc {
        Disc { center: self.center * ComplexPoint::from_polar(1.0, -phi), radius: self.radius }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CollectionRecord")]
pub struct DiscCollection {
    pub ambient: Ambient,
    pub gauge: Gauge,
    pub epsilon: f64,
    pub tail_index: usize,
    pub discs: Vec<Disc>,
}

#[derive(Debug, Clone, Deserialize)]
struct CollectionRecord {
    ambient: Ambient,
    gauge: Gauge,
    epsilon: f64,
    tail_index: usize,
    discs: Vec<Disc>,
}

impl TryFrom<CollectionRecord> for DiscCollection {
    type Error = Error;
    fn try_from(rec: CollectionRecord) -> Result<Self> {
        DiscCollection::new(rec.ambient, rec.gauge, rec.discs, rec.epsilon, rec.tail_index)
    }
}

impl DiscCollection {
    /// Builds a collection, sorting the discs by increasing modulus.
    pub fn new(ambient: Ambient, gauge: Gauge, mut discs: Vec<Disc>, epsilon: f64, tail_index: usize) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid(format!("tail budget {epsilon} must be positive")));
        }
        if tail_index > discs.len() {
            return Err(Error::invalid(format!("tail index {tail_index} beyond {} discs", discs.len())));
        }
        if gauge.ambient() != ambient {
            return Err(Error::invalid(format!("gauge {gauge} does not live in the {ambient:?} ambient")));
        }
        discs.sort_by(|a, b| a.modulus().total_cmp(&b.modulus()));
        Ok(DiscCollection { ambient, gauge, epsilon, tail_index, discs })
    }

    /// Collection whose tail budget is the exact tail weight, nudged up so the strict
    /// inequality holds.
    pub fn sealed(ambient: Ambient, gauge: Gauge, discs: Vec<Disc>, tail_index: usize) -> Result<Self> {
        let mut col = Self::new(ambient, gauge, discs, 1.0, tail_index)?;
        let tail = col.tail_sum();
        col.epsilon = if tail > 0.0 { tail * (1.0 + 1e-9) } else { f64::MIN_POSITIVE };
        Ok(col)
    }

    pub fn empty(gauge: Gauge) -> Self {
        DiscCollection { ambient: gauge.ambient(), gauge, epsilon: 1.0, tail_index: 0, discs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    pub fn tail(&self) -> &[Disc] {
        &self.discs[self.tail_index..]
    }

    /// `r_n / gauge(size_n)`; NaN when the size is outside the gauge domain.
    pub fn ratio(&self, d: &Disc) -> f64 {
        let s = d.size(self.ambient);
        if self.gauge.in_domain(s) {
            d.radius / self.gauge.value(s)
        } else {
            f64::NAN
        }
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.discs.iter().map(|d| self.ratio(d)).collect()
    }

    pub fn tail_sum(&self) -> f64 {
        self.tail().iter().map(|d| self.ratio(d)).sum()
    }

    pub fn diameter_sum(&self) -> f64 {
        self.discs.iter().map(|d| 2.0 * d.radius).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        let ratios = self.ratios();
        let mut offenses = Vec::new();
        for (i, d) in self.discs.iter().enumerate() {
            match self.ambient {
                Ambient::Plane if d.modulus() <= d.radius => offenses.push(Offense::new(i, "disc contains the origin")),
                Ambient::UnitDisc if d.modulus() + d.radius >= 1.0 => {
                    offenses.push(Offense::new(i, "disc not inside the unit disc"))
                }
                _ => {}
            }
            if !(ratios[i] >= 0.0 && ratios[i].is_finite()) {
                offenses.push(Offense::new(i, "size outside the gauge domain"));
            }
        }
        let tail_sum = self.tail_sum();
        let tail_ok = tail_sum < self.epsilon;
        let technical_trend = (self.gauge.class() == GaugeClass::PlaneRapid).then(|| {
            let r_over_x: Vec<f64> = self.discs.iter().map(|d| d.radius / d.center.re).collect();
            tends_to_zero(&r_over_x)
        });
        ValidationReport {
            valid: offenses.is_empty() && tail_ok,
            tail_sum,
            epsilon: self.epsilon,
            tail_ok,
            total_sum: ratios.iter().sum(),
            diameter_sum: self.diameter_sum(),
            ratios_tend_to_zero: tends_to_zero(&ratios),
            technical_trend,
            ratios,
            offenses,
        }
    }

    /// CSV rows `n, re, im, r, ratio`.
    pub fn csv_rows(&self) -> Vec<(usize, f64, f64, f64, f64)> {
        self.discs
            .iter()
            .enumerate()
            .map(|(n, d)| (n, d.center.re, d.center.im, d.radius, self.ratio(d)))
            .collect()
    }
}

/// Envelope test: the largest value over the last quarter does not exceed the
/// largest over the first quarter.
fn tends_to_zero(values: &[f64]) -> bool {
    if values.len() < 4 {
        return true;
    }
    let q = values.len() / 4;
    let head = values[..q].iter().copied().fold(0.0, f64::max);
    let tail = values[values.len() - q..].iter().copied().fold(0.0, f64::max);
    tail <= head
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offense {
    pub index: usize,
    pub reason: String,
}

impl Offense {
    fn new(index: usize, reason: &str) -> Self {
        Offense { index, reason: reason.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub tail_sum: f64,
    pub epsilon: f64,
    pub tail_ok: bool,
    pub total_sum: f64,
    pub diameter_sum: f64,
    pub ratios: Vec<f64>,
    pub ratios_tend_to_zero: bool,
    /// `r_n / x_n → 0` envelope, rapid gauges only.
    pub technical_trend: Option<bool>,
    pub offenses: Vec<Offense>,
}

fn require_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::invalid(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// Rays `arg z = 1/n` carrying discs `|z_{n,k}| = k·e^n`, `r_{n,k} = 2^{-n-k}`.
pub fn gen_example1(n_max: usize, k_max: usize) -> Result<DiscCollection> {
    require_positive("n_max", n_max)?;
    require_positive("k_max", k_max)?;
    let mut discs = Vec::with_capacity(n_max * k_max);
    for n in 1..=n_max {
        for k in 1..=k_max {
            let modulus = k as f64 * (n as f64).exp();
            let center = ComplexPoint::from_polar(modulus, 1.0 / n as f64);
            discs.push(Disc::new(center, (-((n + k) as f64)).exp2())?);
        }
    }
    DiscCollection::sealed(Ambient::Plane, Gauge::constant(), discs, 0)
}

/// Horizontal lines `y = 1/n` carrying discs `|z_{n,k}| = k·e^n`, `r_{n,k} = 2^{-n-k}`.
pub fn gen_example2(n_max: usize, k_max: usize) -> Result<DiscCollection> {
    require_positive("n_max", n_max)?;
    require_positive("k_max", k_max)?;
    let mut discs = Vec::with_capacity(n_max * k_max);
    for n in 1..=n_max {
        let y = 1.0 / n as f64;
        for k in 1..=k_max {
            let modulus = k as f64 * (n as f64).exp();
            let x = (modulus * modulus - y * y).sqrt();
            discs.push(Disc::at(x, y, (-((n + k) as f64)).exp2())?);
        }
    }
    DiscCollection::sealed(Ambient::Plane, Gauge::constant(), discs, 0)
}

/// Cantor-cover R-set: level `k` has `2^k` discs of radius `3^{-k}` centered over the
/// midpoints of the level-`k` Cantor intervals. Imaginary parts are 1 unless a seed
/// is given, in which case they are drawn from `[1, 2)`.
pub fn gen_cantor_rset(levels: usize, imaginary_seed: Option<u64>) -> Result<DiscCollection> {
    require_positive("levels", levels)?;
    if levels > 24 {
        return Err(Error::invalid("at most 24 Cantor levels"));
    }
    let mut rng = imaginary_seed.map(ChaCha8Rng::seed_from_u64);
    let mut discs = Vec::with_capacity((1usize << (levels + 1)) - 2);
    for (k, intervals) in cantor_levels(levels).into_iter().enumerate() {
        let radius = 3f64.powi(-(k as i32 + 1));
        for (lo, hi) in intervals {
            let im = rng.as_mut().map_or(1.0, |r| r.gen_range(1.0..2.0));
            discs.push(Disc::at(0.5 * (lo + hi), im, radius)?);
        }
    }
    DiscCollection::sealed(Ambient::Plane, Gauge::constant(), discs, 0)
}

/// Cantor intervals of levels `1..=levels` (level `k` has `2^k` intervals of length `3^{-k}`).
pub fn cantor_levels(levels: usize) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(levels);
    let mut current = vec![(0.0, 1.0)];
    for _ in 0..levels {
        current = current
            .iter()
            .flat_map(|&(lo, hi)| {
                let third = (hi - lo) / 3.0;
                [(lo, lo + third), (hi - third, hi)]
            })
            .collect();
        out.push(current.clone());
    }
    out
}

/// Discs on the horocycle `|z - 1/2| = 1/2`: `z_n = (1 + e^{i/n})/2`,
/// `r_n = 1/(n² log²(1+n))`, gauge `√x`. Indices start at the first `n` whose disc
/// fits inside the unit disc.
pub fn gen_horocycle_lset(n_max: usize) -> Result<DiscCollection> {
    require_positive("n_max", n_max)?;
    let mut discs = Vec::new();
    for n in 1..=n_max {
        let d = horocycle_disc(n);
        if d.modulus() + d.radius < 1.0 {
            discs.push(d);
        }
    }
    DiscCollection::sealed(Ambient::UnitDisc, Gauge::unit_concave_power(0.5)?, discs, 0)
}

/// The `n`-th horocycle disc, without the inside-the-disc filter.
pub fn horocycle_disc(n: usize) -> Disc {
    let t = n as f64;
    let half = 0.5 / t;
    // (1 + e^{iθ})/2 = cos(θ/2)·e^{iθ/2}.
    let center = ComplexPoint::from_polar(half.cos(), half);
    let radius = 1.0 / (t * t * (1.0 + t).ln().powi(2));
    Disc { center, radius }
}

/// `1 - |z_n|` on the horocycle, evaluated without cancellation: `2 sin²(1/(4n))`.
pub fn horocycle_gap(n: usize) -> f64 {
    2.0 * (0.25 / n as f64).sin().powi(2)
}

/// Seeded random collection respecting the tail budget.
///
/// Plane: abscissas start at `2e` and grow by `U(0.5, 1.5)` steps (rapid gauges by
/// factors `1 + U(0.01, 0.03)`), ordinates lie in `[-M x, M x]`. Radii are
/// `s0 · w_n · gauge(size_n)` with random weights `w_n`, scaled so the tail beyond
/// `N = count / 2` has weight `0.9 ε`, then clamped to `x/10` so that
/// `x - r >= x/2 >= e`.
///
/// Unit disc: centers inside the Stolz angle `S(1, M)` (`M > 1`) with gaps
/// `1 - |z|` decreasing geometrically from `1/2` to `1e-5`, radii clamped to a
/// sixteenth of the gap.
pub fn gen_random(
    ambient: Ambient,
    gauge: Gauge,
    count: usize,
    epsilon: f64,
    envelope_m: f64,
    seed: u64,
) -> Result<DiscCollection> {
    require_positive("count", count)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if !(envelope_m > 0.0 && envelope_m.is_finite()) {
        return Err(Error::invalid("envelope M must be positive"));
    }
    if gauge.ambient() != ambient {
        return Err(Error::invalid(format!("gauge {gauge} does not live in the {ambient:?} ambient")));
    }
    if ambient == Ambient::UnitDisc && !(envelope_m > 1.0) {
        return Err(Error::invalid("Stolz aperture M must exceed 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rapid = gauge.class() == GaugeClass::PlaneRapid;

    // Centers and raw weights.
    let mut centers = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    let mut x = 2.0 * E;
    for n in 0..count {
        let u: f64 = rng.gen_range(0.5..1.5);
        match ambient {
            Ambient::Plane => {
                let y = envelope_m * x * rng.gen_range(-1.0..=1.0);
                centers.push(ComplexPoint::new(x, y));
                // Rapid gauges need r_n / x_n → 0 on top of summability.
                weights.push(if rapid { u / ((n + 1) as f64 * x) } else { u / (n + 1) as f64 });
                x = if rapid { x * (1.0 + rng.gen_range(0.01..0.03)) } else { x + rng.gen_range(0.5..1.5) };
            }
            Ambient::UnitDisc => {
                let frac = if count == 1 { 0.0 } else { n as f64 / (count - 1) as f64 };
                let gap = 0.5 * (1e-5f64 / 0.5).powf(frac);
                let t = 1.0 - gap;
                // |1 - t e^{iθ}| < M' gap with M' = (1 + M)/2 keeps the center strictly inside S(1, M).
                let aperture = 0.5 * (1.0 + envelope_m);
                let cos_max = 1.0 - gap * gap * (aperture * aperture - 1.0) / (2.0 * t);
                let theta_max = cos_max.clamp(-1.0, 1.0).acos();
                let theta = theta_max * rng.gen_range(-1.0..=1.0);
                centers.push(ComplexPoint::from_polar(t, theta));
                weights.push(u / (n + 1) as f64);
            }
        }
    }
    let tail_index = count / 2;
    let tail_weight: f64 = weights[tail_index..].iter().sum();
    let s0 = 0.9 * epsilon / tail_weight;

    let mut discs = Vec::with_capacity(count);
    for (c, w) in centers.iter().zip(&weights) {
        let d = Disc { center: *c, radius: 1.0 };
        let size = d.size(ambient);
        let clamp = match ambient {
            Ambient::Plane => c.re / 10.0,
            Ambient::UnitDisc => size / 16.0,
        };
        let r = (s0 * w * gauge.value(size)).min(clamp);
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!("degenerate radius {r} for seed {seed}")));
        }
        discs.push(Disc { center: *c, radius: r });
    }
    DiscCollection::new(ambient, gauge, discs, epsilon, tail_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_collection_is_valid() {
        let col = DiscCollection::empty(Gauge::identity());
        let rep = col.validate();
        assert!(rep.valid);
        assert_eq!(rep.tail_sum, 0.0);
    }

    #[test]
    fn origin_disc_is_reported() {
        let discs = vec![Disc::at(10.0, 0.0, 1.0).unwrap(), Disc::at(0.5, 0.0, 1.0).unwrap()];
        let col = DiscCollection::new(Ambient::Plane, Gauge::constant(), discs, 100.0, 0).unwrap();
        let rep = col.validate();
        assert!(!rep.valid);
        // Sorting puts the offending disc first.
        assert_eq!(rep.offenses[0].index, 0);
        assert_eq!(rep.offenses.len(), 1);
    }

    #[test]
    fn cantor_diameter_sum() {
        let col = gen_cantor_rset(12, None).unwrap();
        assert_eq!(col.len(), (1 << 13) - 2);
        let expected = 4.0 * (1.0 - (2.0f64 / 3.0).powi(12));
        assert!((col.diameter_sum() - expected).abs() < 1e-9);
        assert!(col.validate().valid);
    }

    #[test]
    fn cantor_level_one_projections() {
        let col = gen_cantor_rset(1, None).unwrap();
        let mut spans: Vec<(f64, f64)> =
            col.discs.iter().map(|d| (d.center.re - d.radius, d.center.re + d.radius)).collect();
        spans.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!((spans[0].0 + 1.0 / 6.0).abs() < 1e-15 && (spans[0].1 - 0.5).abs() < 1e-15);
        assert!((spans[1].0 - 0.5).abs() < 1e-15 && (spans[1].1 - 7.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn cantor_covers_nest() {
        let levels = cantor_levels(8);
        for k in 1..levels.len() {
            let r_parent = 3f64.powi(-(k as i32));
            let r_child = 3f64.powi(-(k as i32 + 1));
            for (i, &(lo, hi)) in levels[k].iter().enumerate() {
                let (plo, phi) = levels[k - 1][i / 2];
                let (cm, pm) = (0.5 * (lo + hi), 0.5 * (plo + phi));
                assert!(cm - r_child >= pm - r_parent - 1e-15 && cm + r_child <= pm + r_parent + 1e-15);
            }
        }
    }

    #[test]
    fn cantor_seeded_imaginary_parts_are_deterministic() {
        let a = gen_cantor_rset(4, Some(3)).unwrap();
        let b = gen_cantor_rset(4, Some(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.discs.iter().all(|d| (1.0..2.0).contains(&d.center.im)));
    }

    #[test]
    fn example_generators() {
        let one = gen_example1(1, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one.diameter_sum() - 0.5).abs() < 1e-15);
        let big = gen_example1(20, 20).unwrap();
        let oracle = 2.0 * (1.0 - 2f64.powi(-20)).powi(2);
        assert!((big.diameter_sum() - oracle).abs() < 1e-12);
        assert!(big.diameter_sum() < 2.0);
        assert!(big.validate().valid);
        let two = gen_example2(20, 20).unwrap();
        assert!((two.diameter_sum() - oracle).abs() < 1e-12);
        assert!(gen_example2(1, 1).unwrap().discs[0].center.im == 1.0);
        assert!(gen_example1(0, 3).is_err());
    }

    #[test]
    fn horocycle_identity() {
        for n in [1usize, 2, 5, 50, 1000] {
            let d = horocycle_disc(n);
            let lhs = 1.0 - d.modulus().powi(2);
            let rhs = (1.0 - (1.0 / n as f64).cos()) / 2.0;
            assert!((lhs - rhs).abs() < 1e-12);
        }
        let d2 = horocycle_disc(2);
        assert!((1.0 - d2.modulus().powi(2) - 0.061_208_7).abs() < 1e-7);
        let col = gen_horocycle_lset(200).unwrap();
        assert!(col.validate().valid);
    }

    #[test]
    fn horocycle_ratio_trend() {
        let at = |n: usize| {
            let d = horocycle_disc(n);
            d.radius / horocycle_gap(n) * (1.0 + n as f64).ln().powi(2)
        };
        assert!((at(100_000) - 8.0).abs() < 0.08);
        assert!((at(100_000) - 8.0).abs() < (at(100) - 8.0).abs());
    }

    #[test]
    fn random_plane_collection_validates() {
        let g = Gauge::concave_power(0.5).unwrap();
        let col = gen_random(Ambient::Plane, g, 500, 1e-3, 1.0, 7).unwrap();
        let rep = col.validate();
        assert!(rep.valid, "{:?}", rep.offenses);
        assert!(rep.tail_sum < 1e-3);
        for d in col.tail() {
            assert!(d.center.re - d.radius >= d.center.re / 2.0 && d.center.re / 2.0 >= E);
            assert!(d.center.im.abs() <= d.center.re);
        }
        assert_eq!(col, gen_random(Ambient::Plane, g, 500, 1e-3, 1.0, 7).unwrap());
        let single = gen_random(Ambient::Plane, g, 1, 1e-3, 1.0, 1).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.validate().tail_sum < 1e-3);
    }

    #[test]
    fn random_collections_for_every_gauge() {
        let plane = [
            Gauge::identity(),
            Gauge::log(),
            Gauge::constant(),
            Gauge::convex_power(1.0).unwrap(),
            Gauge::rapid_power(2.0).unwrap(),
            Gauge::rapid_xlog(),
        ];
        for g in plane {
            let col = gen_random(Ambient::Plane, g, 300, 1e-2, 1.0, 11).unwrap();
            let rep = col.validate();
            assert!(rep.valid, "{g}: {:?}", rep.offenses);
            if let Some(t) = rep.technical_trend {
                assert!(t, "{g}");
            }
        }
        let unit = [
            Gauge::unit_concave_power(0.5).unwrap(),
            Gauge::unit_convex_power(2.0).unwrap(),
            Gauge::unit_stolz_power(1.0).unwrap(),
        ];
        for g in unit {
            let col = gen_random(Ambient::UnitDisc, g, 200, 1e-2, 2.0, 5).unwrap();
            let rep = col.validate();
            assert!(rep.valid, "{g}: {:?}", rep.offenses);
            for d in &col.discs {
                assert!((1.0 - d.center).norm() < 2.0 * (1.0 - d.modulus()));
            }
        }
    }

    #[test]
    fn random_rejects_bad_parameters() {
        let g = Gauge::identity();
        assert!(gen_random(Ambient::Plane, g, 0, 1e-3, 1.0, 0).is_err());
        assert!(gen_random(Ambient::Plane, g, 5, 0.0, 1.0, 0).is_err());
        assert!(gen_random(Ambient::UnitDisc, g, 5, 1e-3, 2.0, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let col = gen_example1(2, 2).unwrap();
        let v = serde_json::to_value(&col).unwrap();
        assert_eq!(v["ambient"], "plane");
        assert!(v["discs"][0]["r"].is_number());
        let back: DiscCollection = serde_json::from_value(v).unwrap();
        assert_eq!(back, col);
    }
}
