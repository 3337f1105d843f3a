//! Gauge curve families, curve–disc intersection and per-disc c-intervals.
//!
//! Plane families are `ŷ = ±c·g(x̂)` in the frame rotated by `e^{-iφ}`. Unit-disc
//! families are the level sets `|1 - ζ̄z| = c·g(1 - |z|)`. In both cases a curve
//! meets a closed disc exactly when `c` lies in the range of the c-map over the
//! disc (`ŷ/g(x̂)`, resp. `|1 - w|/g(1 - |w|)` with `w = ζ̄z`).
//!
//! The c-map has no interior critical points over a disc: in the plane
//! `∂/∂ŷ (ŷ/g(x̂)) = 1/g(x̂) ≠ 0`; in the unit disc the angular derivative vanishes
//! only on the real axis, where the map is monotone in the radius. The range over a
//! disc is therefore attained on its boundary circle, which is what
//! [`c_interval`] optimizes over.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disc_sets::{Disc, DiscCollection};
use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge, GaugeClass, GaugeKind};
use crate::numeric::{golden_min, multistart_min};
use crate::ComplexPoint;

/// Samples along the parameter window in [`meet_outcome`].
pub const MEET_SAMPLES: usize = 256;
/// Samples along the boundary circle in [`c_interval`].
pub const CIRCLE_SAMPLES: usize = 1024;
/// Golden-section stopping width.
pub const REFINE_TOL: f64 = 1e-12;
/// Relative half-width of the tolerance band around `distance = radius`.
pub const MEET_BAND: f64 = 1e-9;
/// Largest Stolz aperture accepted by [`bound_stolz`].
pub const MAX_STOLZ_APERTURE: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Upper,
    Lower,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveFamily {
    pub gauge: Gauge,
    /// Rotation `φ` in the plane; `arg ζ` in the unit disc.
    pub angle: f64,
    pub c: f64,
    pub branch: Branch,
}

impl CurveFamily {
    pub fn plane(gauge: Gauge, phi: f64, c: f64, branch: Branch) -> Result<Self> {
        if gauge.ambient() != Ambient::Plane {
            return Err(Error::UnsupportedGauge(gauge.to_string()));
        }
        Self::checked(gauge, phi, c, branch)
    }

    pub fn unit(gauge: Gauge, zeta: ComplexPoint, c: f64, branch: Branch) -> Result<Self> {
        if gauge.ambient() != Ambient::UnitDisc {
            return Err(Error::UnsupportedGauge(gauge.to_string()));
        }
        if (zeta.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("boundary point {zeta} is not unimodular")));
        }
        Self::checked(gauge, zeta.arg(), c, branch)
    }

    fn checked(gauge: Gauge, angle: f64, c: f64, branch: Branch) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!("curve parameter c = {c} must be positive")));
        }
        if !angle.is_finite() {
            return Err(Error::invalid("curve angle must be finite"));
        }
        Ok(CurveFamily { gauge, angle, c, branch })
    }

    pub fn ambient(&self) -> Ambient {
        self.gauge.ambient()
    }

    /// `e^{iφ}` or `ζ`.
    pub fn frame(&self) -> ComplexPoint {
        ComplexPoint::from_polar(1.0, self.angle)
    }

    pub fn with_c(&self, c: f64) -> Self {
        CurveFamily { c, ..*self }
    }

    /// Point of the selected branch at parameter `t` (`x̂` in the plane, `|z|` in
    /// the unit disc). `Both` selects the upper branch.
    pub fn boundary_point(&self, t: f64) -> Result<ComplexPoint> {
        let lower = self.branch == Branch::Lower;
        let local = match self.ambient() {
            Ambient::Plane => {
                if !(self.gauge.in_domain(t) && t >= self.gauge.curve_start()) {
                    return Err(Error::NoPoint(t));
                }
                let y = self.c * self.gauge.value(t);
                ComplexPoint::new(t, if lower { -y } else { y })
            }
            Ambient::UnitDisc => {
                if !(t > 0.0 && t < 1.0) {
                    return Err(Error::NoPoint(t));
                }
                let theta = unit_offset(&self.gauge, self.c, 1.0 - t).ok_or(Error::NoPoint(t))?;
                ComplexPoint::from_polar(t, if lower { -theta } else { theta })
            }
        };
        Ok(self.frame() * local)
    }
}

/// Angular offset `θ ∈ [0, π]` of the unit-disc curve at gap `u = 1 - t`, from
/// `1 - cos θ = (c² g(u)² - u²) / (2t)`.
fn unit_offset(g: &Gauge, c: f64, u: f64) -> Option<f64> {
    if !g.in_domain(u) {
        return None;
    }
    let t = 1.0 - u;
    let cg = c * g.value(u);
    let one_minus_cos = (cg - u) * (cg + u) / (2.0 * t);
    if !(0.0..=2.0).contains(&one_minus_cos) {
        return None;
    }
    Some(2.0 * (0.5 * one_minus_cos).sqrt().asin())
}

/// `1 - w` for the unit-disc curve point at gap `u` on the given side, computed
/// without cancellation near `w = 1`.
fn unit_curve_v(u: f64, theta: f64, sign: f64) -> ComplexPoint {
    let t = 1.0 - u;
    let half = 0.5 * theta;
    ComplexPoint::new(u + 2.0 * t * half.sin().powi(2), -sign * t * theta.sin())
}

/// `1 - |w|` from `v = 1 - w`.
fn gap_from_v(v: ComplexPoint) -> f64 {
    let one_minus_sq = 2.0 * v.re - v.norm_sqr();
    one_minus_sq / (1.0 + (ComplexPoint::new(1.0, 0.0) - v).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeetStatus {
    Hit,
    Miss,
    /// Minimum distance within the tolerance band around the radius.
    Band,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeetOutcome {
    pub status: MeetStatus,
    /// Minimum distance from the curve to the disc center over the search window;
    /// infinite when a quick reject fired.
    pub min_distance: f64,
}

impl MeetOutcome {
    fn miss() -> Self {
        MeetOutcome { status: MeetStatus::Miss, min_distance: f64::INFINITY }
    }

    fn classify(min_distance: f64, radius: f64) -> Self {
        let band = MEET_BAND * radius;
        let status = if (min_distance - radius).abs() <= band {
            MeetStatus::Band
        } else if min_distance < radius {
            MeetStatus::Hit
        } else {
            MeetStatus::Miss
        };
        MeetOutcome { status, min_distance }
    }

    /// Boolean surface: bands count as hits.
    pub fn hit(&self) -> bool {
        self.status != MeetStatus::Miss
    }
}

/// Whether the curve meets the closed disc (band cases count as hits).
pub fn meets(fam: &CurveFamily, d: &Disc) -> bool {
    meet_outcome(fam, d).hit()
}

/// Three-valued curve–disc test by windowed multi-start distance minimization.
pub fn meet_outcome(fam: &CurveFamily, d: &Disc) -> MeetOutcome {
    let branches: &[f64] = match fam.branch {
        Branch::Upper => &[1.0],
        Branch::Lower => &[-1.0],
        Branch::Both => &[1.0, -1.0],
    };
    let mut best = f64::INFINITY;
    for &sign in branches {
        let dist = match fam.ambient() {
            Ambient::Plane => plane_min_distance(fam, &d.rotated(fam.angle), sign),
            Ambient::UnitDisc => unit_min_distance(fam, &d.rotated(fam.angle), sign),
        };
        best = best.min(dist);
    }
    if best.is_finite() {
        MeetOutcome::classify(best, d.radius)
    } else {
        MeetOutcome::miss()
    }
}

fn plane_domain_lo(g: &Gauge) -> f64 {
    match g.class() {
        GaugeClass::PlaneConvexDecreasing => f64::MIN_POSITIVE,
        _ => g.curve_start(),
    }
}

/// Minimum distance from the local disc center to the branch `ŷ = sign·c·g(x̂)`.
fn plane_min_distance(fam: &CurveFamily, local: &Disc, sign: f64) -> f64 {
    let g = &fam.gauge;
    let (xn, yn, r) = (local.center.re, local.center.im, local.radius);
    let pad = 2.0 * r;
    let lo = (xn - r - pad).max(plane_domain_lo(g));
    let hi = xn + r + pad;
    if !(hi > lo) {
        return f64::INFINITY;
    }
    // Quick reject: g is monotone, so the branch ordinate range over the window is
    // spanned by its endpoint values.
    let (ga, gb) = (g.value(lo), g.value(hi));
    let (ylo, yhi) = {
        let (a, b) = (sign * fam.c * ga, sign * fam.c * gb);
        (a.min(b), a.max(b))
    };
    if ylo.is_finite() && yhi.is_finite() && (yhi < yn - r * (1.0 + MEET_BAND) || ylo > yn + r * (1.0 + MEET_BAND)) {
        return f64::INFINITY;
    }
    let d2 = |x: f64| {
        let dy = sign * fam.c * g.value(x) - yn;
        let dx = x - xn;
        dx * dx + dy * dy
    };
    multistart_min(d2, lo, hi, MEET_SAMPLES, REFINE_TOL).1.sqrt()
}

/// Minimum distance from the local disc center to the unit-disc branch with
/// `sign·Im w >= 0`, searched over the gap window `u ∈ [u_n - 3r, u_n + 3r]`.
fn unit_min_distance(fam: &CurveFamily, local: &Disc, sign: f64) -> f64 {
    let g = &fam.gauge;
    let vn = ComplexPoint::new(1.0, 0.0) - local.center;
    let un = gap_from_v(vn);
    let r = local.radius;
    // Quick reject by the c-range of the disc.
    let (c_min, c_max) = unit_chain_range(g, vn.norm(), un, r);
    if fam.c < c_min * (1.0 - 1e-9) || fam.c > c_max * (1.0 + 1e-9) {
        return f64::INFINITY;
    }
    let pad = 2.0 * r;
    let lo = (un - r - pad).max(f64::MIN_POSITIVE);
    let hi = (un + r + pad).min(1.0 - f64::EPSILON);
    if !(hi > lo) {
        return f64::INFINITY;
    }
    let d2 = |u: f64| match unit_offset(g, fam.c, u) {
        Some(theta) => (unit_curve_v(u, theta, sign) - vn).norm_sqr(),
        None => f64::INFINITY,
    };
    multistart_min(d2, lo, hi, MEET_SAMPLES, REFINE_TOL).1.sqrt()
}

/// Rigorous c-range enclosure of a unit-disc disc from `|1-w| ∈ [|v|-r, |v|+r]`
/// and `1-|w| ∈ [u-r, u+r]`.
fn unit_chain_range(g: &Gauge, v_abs: f64, u: f64, r: f64) -> (f64, f64) {
    let lo = (v_abs - r).max(0.0) / g.value(u + r);
    let hi = (v_abs + r) / g.value((u - r).max(f64::MIN_POSITIVE));
    (lo, hi)
}

/// Which width bound a c-interval report is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `4 α^N r / K(x)` (concave and constant gauges).
    Cc,
    /// `4 r / (β L(|z|))` (decreasing convex gauges).
    Cc2,
    /// `(4 + 2K) r / (1 - |z|)^γ`.
    Stolz,
    /// First-line enclosure `hi(x ∓ r, y ± r) - lo(x ± r, y ∓ r)` of the c-map.
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CIntervalReport {
    pub disc_index: usize,
    pub c_lo: f64,
    pub c_hi: f64,
    pub width: f64,
    pub paper_bound: f64,
    pub bound_kind: BoundKind,
    pub satisfied: bool,
    /// The disc misses the upper branch entirely (`c_hi <= 0`).
    pub empty: bool,
}

/// c-map of the family frame at a point already expressed in local coordinates
/// (plane) or as `v = 1 - w` (unit disc).
fn cmap_plane(g: &Gauge, w: ComplexPoint) -> f64 {
    w.im / g.value(w.re)
}

fn cmap_unit(g: &Gauge, v: ComplexPoint) -> f64 {
    v.norm() / g.value(gap_from_v(v))
}

/// Smallest `N >= 1` with `1 + M <= 2^N`.
pub fn envelope_n(m: f64) -> u32 {
    if m <= 1.0 {
        1
    } else {
        (1.0 + m).log2().ceil().max(1.0) as u32
    }
}

fn asymptotic_regime(g: &Gauge, x: f64, r: f64) -> Result<()> {
    if x - r >= x / 2.0 && x / 2.0 >= g.r_threshold {
        Ok(())
    } else {
        Err(Error::NotInAsymptoticRegime(format!("x = {x}, r = {r}, R = {}", g.r_threshold)))
    }
}

/// `4 α^N r / K(x)` for a disc given in the rotated frame.
pub fn bound_cc(g: &Gauge, local: &Disc, n_envelope: u32) -> Result<f64> {
    if !matches!(g.class(), GaugeClass::PlaneConcave | GaugeClass::PlaneConstant) {
        return Err(Error::UnsupportedGauge(g.to_string()));
    }
    let (x, r) = (local.center.re, local.radius);
    asymptotic_regime(g, x, r)?;
    let alpha = g.alpha.unwrap_or(2.0);
    Ok(4.0 * alpha.powi(n_envelope as i32) * r / g.value(x))
}

/// `4 r / (β L(|z|))`.
pub fn bound_cc2(g: &Gauge, local: &Disc) -> Result<f64> {
    if g.class() != GaugeClass::PlaneConvexDecreasing {
        return Err(Error::UnsupportedGauge(g.to_string()));
    }
    let (x, r) = (local.center.re, local.radius);
    asymptotic_regime(g, x, r)?;
    let beta = g.beta.ok_or_else(|| Error::UnsupportedGauge(g.to_string()))?;
    Ok(4.0 * r / (beta * g.value(local.center.norm())))
}

/// `(4 + 2K) r / (1 - |z|)^γ` for a disc in the frame `ζ = 1`.
pub fn bound_stolz(gamma: f64, local: &Disc, k_comp: f64) -> Result<f64> {
    if !(gamma >= 1.0) {
        return Err(Error::invalid(format!("Stolz exponent {gamma} must be >= 1")));
    }
    let v = ComplexPoint::new(1.0, 0.0) - local.center;
    let u = gap_from_v(v);
    if !(u > 0.0 && v.norm() < MAX_STOLZ_APERTURE * u) {
        return Err(Error::NotStolz);
    }
    Ok((4.0 + 2.0 * k_comp) * local.radius / u.powf(gamma))
}

/// Comparability constant `K = 2γ |1 - z| / (1 - |z| - r)` for one disc.
pub fn stolz_constant(gamma: f64, local: &Disc) -> f64 {
    let v = ComplexPoint::new(1.0, 0.0) - local.center;
    2.0 * gamma * v.norm() / (gap_from_v(v) - local.radius)
}

/// Certified constant for a whole collection: the supremum of [`stolz_constant`]
/// over its discs, rotated into the frame `ζ = 1`.
pub fn certified_stolz_constant(gamma: f64, discs: &[Disc], zeta_angle: f64) -> f64 {
    discs.iter().map(|d| stolz_constant(gamma, &d.rotated(zeta_angle))).fold(0.0, f64::max)
}

fn chain_bound(g: &Gauge, local: &Disc) -> f64 {
    let r = local.radius;
    match g.ambient() {
        Ambient::Plane => {
            let (x, y) = (local.center.re, local.center.im);
            if g.is_increasing() || g.class() == GaugeClass::PlaneConstant {
                (y + r) / g.value(x - r) - (y - r).max(0.0) / g.value(x + r)
            } else {
                (y + r) / g.value(x + r) - (y - r).max(0.0) / g.value(x - r)
            }
        }
        Ambient::UnitDisc => {
            let v = ComplexPoint::new(1.0, 0.0) - local.center;
            let (lo, hi) = unit_chain_range(g, v.norm(), gap_from_v(v), r);
            hi - lo
        }
    }
}

/// How the paper bound of a c-interval is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundContext {
    /// Per-disc constants: envelope `N` from the disc slope `|ŷ|/x̂`, Stolz `K` from
    /// the disc itself.
    PerDisc,
    /// Collection-wide certified Stolz constant.
    Stolz { k_comp: f64 },
}

fn paper_bound(g: &Gauge, local: &Disc, ctx: BoundContext) -> (f64, BoundKind) {
    let fallback = || (chain_bound(g, local), BoundKind::Chain);
    match (g.class(), g.kind) {
        (GaugeClass::PlaneConcave | GaugeClass::PlaneConstant, _) => {
            let m = local.center.im.abs() / local.center.re;
            bound_cc(g, local, envelope_n(m)).map_or_else(|_| fallback(), |b| (b, BoundKind::Cc))
        }
        (GaugeClass::PlaneConvexDecreasing, _) => {
            bound_cc2(g, local).map_or_else(|_| fallback(), |b| (b, BoundKind::Cc2))
        }
        (_, GaugeKind::UnitStolzPower { gamma }) => {
            let k = match ctx {
                BoundContext::Stolz { k_comp } => k_comp,
                BoundContext::PerDisc => stolz_constant(gamma, local),
            };
            bound_stolz(gamma, local, k).map_or_else(|_| fallback(), |b| (b, BoundKind::Stolz))
        }
        _ => fallback(),
    }
}

/// Range of the c-map over the closed disc, with the applicable width bound.
///
/// `angle` is `φ` (plane) or `arg ζ` (unit disc). Plane intervals describe the
/// upper branch: `c_lo` is clipped at 0 and a disc below the axis yields an empty
/// report.
pub fn c_interval(gauge: &Gauge, angle: f64, d: &Disc, disc_index: usize) -> Result<CIntervalReport> {
    c_interval_with(gauge, angle, d, disc_index, BoundContext::PerDisc)
}

pub fn c_interval_with(
    gauge: &Gauge,
    angle: f64,
    d: &Disc,
    disc_index: usize,
    ctx: BoundContext,
) -> Result<CIntervalReport> {
    let local = d.rotated(angle);
    let (raw_lo, raw_hi) = c_range(gauge, &local, disc_index)?;
    let (bound, bound_kind) = paper_bound(gauge, &local, ctx);
    let empty = gauge.ambient() == Ambient::Plane && raw_hi <= 0.0;
    let (c_lo, c_hi) = if empty {
        (0.0, 0.0)
    } else if gauge.ambient() == Ambient::Plane {
        (raw_lo.max(0.0), raw_hi)
    } else {
        (raw_lo, raw_hi)
    };
    let width = c_hi - c_lo;
    Ok(CIntervalReport {
        disc_index,
        c_lo,
        c_hi,
        width,
        paper_bound: bound,
        bound_kind,
        satisfied: width <= bound * (1.0 + 1e-9),
        empty,
    })
}

/// Unclipped c-map range over a disc given in local coordinates.
fn c_range(g: &Gauge, local: &Disc, disc_index: usize) -> Result<(f64, f64)> {
    let r = local.radius;
    let f: Box<dyn Fn(f64) -> f64 + Sync> = match g.ambient() {
        Ambient::Plane => {
            if !(local.center.re - r > plane_domain_lo(g)) || !g.in_domain(local.center.re - r) {
                return Err(Error::PartialDomain { index: disc_index });
            }
            let c = local.center;
            let g = *g;
            Box::new(move |phi: f64| cmap_plane(&g, c + ComplexPoint::from_polar(r, phi)))
        }
        Ambient::UnitDisc => {
            if local.center.norm() + r >= 1.0 {
                return Err(Error::PartialDomain { index: disc_index });
            }
            let vn = ComplexPoint::new(1.0, 0.0) - local.center;
            let g = *g;
            Box::new(move |phi: f64| cmap_unit(&g, vn - ComplexPoint::from_polar(r, phi)))
        }
    };
    let two_pi = std::f64::consts::TAU;
    let (_, lo) = circle_min(&f, two_pi);
    let (_, neg_hi) = circle_min(&|phi| -f(phi), two_pi);
    if !(lo.is_finite() && neg_hi.is_finite()) {
        return Err(Error::Numeric(format!("non-finite c-map on disc {disc_index}")));
    }
    Ok((lo, -neg_hi))
}

/// Minimum of a periodic function on `[0, period)`, sampled then refined.
fn circle_min(f: &dyn Fn(f64) -> f64, period: f64) -> (f64, f64) {
    let n = CIRCLE_SAMPLES;
    let h = period / n as f64;
    let ys: Vec<f64> = (0..n).map(|i| f(h * i as f64)).collect();
    let mut best = (0.0, f64::INFINITY);
    for i in 0..n {
        let (prev, next) = (ys[(i + n - 1) % n], ys[(i + 1) % n]);
        if ys[i] <= prev && ys[i] <= next {
            let a = h * i as f64 - h;
            let cand = golden_min(f, a, a + 2.0 * h, REFINE_TOL);
            let cand = if cand.1 <= ys[i] { cand } else { (h * i as f64, ys[i]) };
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    best
}

/// c-intervals for every disc of a collection, in disc order. Stolz gauges use the
/// collection's certified comparability constant.
pub fn c_intervals(col: &DiscCollection, angle: f64) -> Vec<Result<CIntervalReport>> {
    let ctx = match col.gauge.kind {
        GaugeKind::UnitStolzPower { gamma } => {
            BoundContext::Stolz { k_comp: certified_stolz_constant(gamma, &col.discs, angle) }
        }
        _ => BoundContext::PerDisc,
    };
    col.discs
        .par_iter()
        .enumerate()
        .map(|(i, d)| c_interval_with(&col.gauge, angle, d, i, ctx))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    /// Indices (into the collection) of the tail discs.
    pub indices: Vec<usize>,
    pub widths: Vec<f64>,
    /// Non-increasing envelope: suffix maxima of the widths.
    pub envelope: Vec<f64>,
    pub initial: f64,
    pub final_width: f64,
    /// `final / initial`.
    pub ratio: f64,
    /// Tail discs in the last quarter whose `r_n / x̂_n` is not below the largest
    /// value of the first quarter.
    pub technical_failures: Vec<usize>,
    pub pass: bool,
    /// Widths tending to zero stand in for "no interior points", which no finite
    /// computation certifies.
    pub surrogate: bool,
}

/// Width trend of the tail c-intervals for a rapid plane gauge.
pub fn width_trend_rapid(col: &DiscCollection, phi: f64) -> Result<TrendReport> {
    if col.gauge.class() != GaugeClass::PlaneRapid {
        return Err(Error::UnsupportedGauge(col.gauge.to_string()));
    }
    let start = col.tail_index;
    let tail: Vec<(usize, Disc)> = col.discs[start..].iter().enumerate().map(|(i, d)| (start + i, *d)).collect();
    let widths = tail
        .par_iter()
        .map(|(i, d)| c_interval(&col.gauge, phi, d, *i).map(|rep| rep.width))
        .collect::<Result<Vec<f64>>>()?;
    let mut envelope = widths.clone();
    for i in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[i] = envelope[i].max(envelope[i + 1]);
    }
    let q: Vec<f64> = tail
        .iter()
        .map(|(_, d)| {
            let l = d.rotated(phi);
            l.radius / l.center.re
        })
        .collect();
    let mut technical_failures = Vec::new();
    if q.len() >= 4 {
        let quarter = q.len() / 4;
        let head = q[..quarter].iter().copied().fold(0.0, f64::max);
        for (k, &v) in q.iter().enumerate().skip(q.len() - quarter) {
            if v >= head * (1.0 - 1e-12) {
                technical_failures.push(tail[k].0);
            }
        }
    }
    let (initial, final_width) = match (envelope.first(), widths.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0.0, 0.0),
    };
    let ratio = if initial > 0.0 { final_width / initial } else { 0.0 };
    let pass = technical_failures.is_empty() && (widths.len() < 2 || ratio < 0.1);
    Ok(TrendReport {
        indices: tail.iter().map(|(i, _)| *i).collect(),
        widths,
        envelope,
        initial,
        final_width,
        ratio,
        technical_failures,
        pass,
        surrogate: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn id() -> Gauge {
        Gauge::identity()
    }

    fn sqrt_g() -> Gauge {
        Gauge::concave_power(0.5).unwrap()
    }

    fn close(a: ComplexPoint, b: ComplexPoint, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn plane_boundary_points() {
        let f = CurveFamily::plane(id(), 0.0, 1.0, Branch::Upper).unwrap();
        assert!(close(f.boundary_point(3.0).unwrap(), ComplexPoint::new(3.0, 3.0), 1e-15));
        let r = CurveFamily::plane(id(), FRAC_PI_2, 1.0, Branch::Upper).unwrap();
        assert!(close(r.boundary_point(3.0).unwrap(), ComplexPoint::new(-3.0, 3.0), 1e-14));
        assert!(matches!(
            CurveFamily::plane(Gauge::log(), 0.0, 1.0, Branch::Upper).unwrap().boundary_point(0.5),
            Err(Error::NoPoint(_))
        ));
    }

    #[test]
    fn unit_boundary_point_solves_modulus_equation() {
        let g = Gauge::unit_concave_power(0.5).unwrap();
        let f = CurveFamily::unit(g, ComplexPoint::new(1.0, 0.0), 1.0, Branch::Upper).unwrap();
        let z = f.boundary_point(0.99).unwrap();
        assert!(((1.0 - z).norm() - 0.1).abs() < 1e-12);
        assert!((z.norm() - 0.99).abs() < 1e-15);
        let low = f.with_c(1.0);
        let lower = CurveFamily { branch: Branch::Lower, ..low }.boundary_point(0.99).unwrap();
        assert_eq!(lower, z.conj());
    }

    #[test]
    fn unit_curve_missing_point() {
        // |1 - w| >= 1 - |w|, so c·u² = |1 - w| has no solution for small u when c = 1.
        let g = Gauge::unit_convex_power(2.0).unwrap();
        let f = CurveFamily::unit(g, ComplexPoint::new(1.0, 0.0), 1.0, Branch::Upper).unwrap();
        assert!(matches!(f.boundary_point(0.9), Err(Error::NoPoint(_))));
    }

    #[test]
    fn meets_examples() {
        let lin = CurveFamily::plane(id(), 0.0, 1.0, Branch::Upper).unwrap();
        assert!(meets(&lin, &Disc::at(2.0, 2.0, 0.5).unwrap()));
        let sq = CurveFamily::plane(sqrt_g(), 0.0, 1.0, Branch::Upper).unwrap();
        assert!(!meets(&sq, &Disc::at(4.0, -2.0, 0.1).unwrap()));
        let out = meet_outcome(&sq, &Disc::at(4.0, 2.1, 0.05).unwrap());
        assert_eq!(out.status, MeetStatus::Miss);
    }

    #[test]
    fn meets_distance_oracle() {
        // Dense brute force of d(x) = sqrt((x-4)² + (√x - 2.1)²).
        let oracle = (0..2_000_001)
            .map(|i| 3.0 + 2.0 * i as f64 / 2e6)
            .map(|x: f64| ((x - 4.0).powi(2) + (x.sqrt() - 2.1).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!((oracle - 0.0970).abs() < 1e-4);
        let sq = CurveFamily::plane(sqrt_g(), 0.0, 1.0, Branch::Upper).unwrap();
        let out = meet_outcome(&sq, &Disc::at(4.0, 2.1, 0.2).unwrap());
        assert_eq!(out.status, MeetStatus::Hit);
        assert!((out.min_distance - oracle).abs() < 1e-9);
    }

    #[test]
    fn rotation_equivariance() {
        let d = Disc::at(-3.0, 4.2, 0.4).unwrap();
        for phi in [0.3, 1.0, 2.0, PI] {
            for c in [0.5, 1.0, 1.4, 2.0] {
                let fam = CurveFamily::plane(id(), phi, c, Branch::Both).unwrap();
                let base = CurveFamily { angle: 0.0, ..fam };
                assert_eq!(meets(&fam, &d), meets(&base, &d.rotated(phi)));
            }
        }
    }

    #[test]
    fn linear_gauge_closed_form() {
        let closed = |x: f64, y: f64, r: f64| {
            let s = r * (x * x + y * y - r * r).sqrt();
            ((x * y - s) / (x * x - r * r), (x * y + s) / (x * x - r * r))
        };
        let rep = c_interval(&id(), 0.0, &Disc::at(4.0, 2.0, 0.1).unwrap(), 0).unwrap();
        let (lo, hi) = closed(4.0, 2.0, 0.1);
        assert!((rep.c_lo - lo).abs() < 1e-9 && (rep.c_hi - hi).abs() < 1e-9);
        assert!((rep.c_lo - 0.47236).abs() < 1e-5 && (rep.c_hi - 0.52828).abs() < 1e-5);
        assert!(rep.satisfied);
        assert!((rep.paper_bound - 0.2).abs() < 1e-15);
        for (x, y, r) in [(10.0, 3.0, 0.5), (7.0, 0.1, 0.3), (100.0, 60.0, 2.0)] {
            let rep = c_interval(&id(), 0.0, &Disc::at(x, y, r).unwrap(), 0).unwrap();
            let (lo, hi) = closed(x, y, r);
            assert!((rep.c_hi - hi).abs() < 1e-9, "{x} {y}");
            assert!((rep.c_lo - lo.max(0.0)).abs() < 1e-9, "{x} {y}");
        }
        let centered = c_interval(&id(), 0.0, &Disc::at(2.0, 2.0, 0.1).unwrap(), 0).unwrap();
        assert!(centered.c_lo <= 1.0 && 1.0 <= centered.c_hi);
        let below = c_interval(&id(), 0.0, &Disc::at(4.0, -2.0, 0.1).unwrap(), 0).unwrap();
        assert!(below.empty);
        assert!(matches!(
            c_interval(&id(), 0.0, &Disc::at(0.05, 1.0, 0.1).unwrap(), 3),
            Err(Error::PartialDomain { index: 3 })
        ));
    }

    #[test]
    fn meets_agrees_with_c_interval() {
        let discs = [
            Disc::at(4.0, 2.0, 0.1).unwrap(),
            Disc::at(30.0, 4.0, 0.7).unwrap(),
            Disc::at(9.0, 1.0, 0.05).unwrap(),
        ];
        for g in [id(), sqrt_g(), Gauge::log()] {
            for d in &discs {
                let rep = c_interval(&g, 0.0, d, 0).unwrap();
                let tol = 1e-6 * rep.c_hi;
                for i in 0..=20 {
                    let c = rep.c_lo + tol + (rep.width - 2.0 * tol) * i as f64 / 20.0;
                    assert!(meets(&CurveFamily::plane(g, 0.0, c, Branch::Upper).unwrap(), d), "{g} {c}");
                }
                for c in [rep.c_lo - tol - 1e-3 * rep.c_lo, rep.c_hi + tol + 1e-3 * rep.c_hi] {
                    if c > 0.0 {
                        assert!(!meets(&CurveFamily::plane(g, 0.0, c, Branch::Upper).unwrap(), d), "{g} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn unit_meets_agrees_with_c_interval() {
        let one = ComplexPoint::new(1.0, 0.0);
        let g = Gauge::unit_concave_power(0.5).unwrap();
        let d = Disc::new(ComplexPoint::from_polar(0.99, 0.02), 0.001).unwrap();
        let rep = c_interval(&g, 0.0, &d, 0).unwrap();
        let tol = 1e-6 * rep.c_hi;
        for i in 0..=10 {
            let c = rep.c_lo + tol + (rep.width - 2.0 * tol) * i as f64 / 10.0;
            assert!(meets(&CurveFamily::unit(g, one, c, Branch::Both).unwrap(), &d));
        }
        assert!(!meets(&CurveFamily::unit(g, one, rep.c_hi * 1.001, Branch::Both).unwrap(), &d));
        assert!(!meets(&CurveFamily::unit(g, one, rep.c_lo * 0.999, Branch::Both).unwrap(), &d));
        // The disc sits above the axis, so the lower branch misses it.
        let mid = 0.5 * (rep.c_lo + rep.c_hi);
        assert!(!meets(&CurveFamily::unit(g, one, mid, Branch::Lower).unwrap(), &d));
    }

    #[test]
    fn bound_examples() {
        let b = bound_cc(&sqrt_g(), &Disc::at(100.0, 5.0, 0.01).unwrap(), 1).unwrap();
        assert!((b - 4.0 * 2f64.sqrt() * 0.01 / 10.0).abs() < 1e-15);
        let small = bound_cc(&sqrt_g(), &Disc::at(100.0, 5.0, 1e-9).unwrap(), 1).unwrap();
        assert!(small < 1e-9);
        assert!(matches!(
            bound_cc(&sqrt_g(), &Disc::at(1.5, 0.5, 0.1).unwrap(), 1),
            Err(Error::NotInAsymptoticRegime(_))
        ));
        let l = Gauge::convex_power(1.0).unwrap();
        let b2 = bound_cc2(&l, &Disc::at(10.0, 0.05, 1e-4).unwrap()).unwrap();
        assert!((b2 - 8e-3).abs() < 1e-6);
        let s = bound_stolz(1.0, &Disc::at(0.9, 0.0, 0.001).unwrap(), 1.0).unwrap();
        assert!((s - 0.06).abs() < 1e-12);
        let s2 = bound_stolz(2.0, &Disc::at(0.9, 0.0, 0.001).unwrap(), 1.0).unwrap();
        assert!((s2 / s - 10.0).abs() < 1e-9);
        assert!(matches!(bound_stolz(1.0, &Disc::at(0.0, 0.999, 1e-4).unwrap(), 1.0), Err(Error::NotStolz)));
    }

    #[test]
    fn envelope_n_values() {
        assert_eq!(envelope_n(0.5), 1);
        assert_eq!(envelope_n(1.0), 1);
        assert_eq!(envelope_n(3.0), 2);
        assert_eq!(envelope_n(3.5), 3);
    }

    #[test]
    fn rapid_trend_examples() {
        let g = Gauge::rapid_power(2.0).unwrap();
        let discs: Vec<Disc> = (3..60).map(|n| Disc::at(n as f64, n as f64, 1.0).unwrap()).collect();
        let col = DiscCollection::sealed(Ambient::Plane, g, discs, 0).unwrap();
        let rep = width_trend_rapid(&col, 0.0).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.widths.windows(2).all(|w| w[1] < w[0]));

        let growing: Vec<Disc> = (3..60).map(|n| Disc::at(n as f64, 0.5 * n as f64, 0.1 * n as f64).unwrap()).collect();
        let col = DiscCollection::sealed(Ambient::Plane, g, growing, 0).unwrap();
        let rep = width_trend_rapid(&col, 0.0).unwrap();
        assert!(!rep.pass);
        assert!(!rep.technical_failures.is_empty());

        let empty = DiscCollection::empty(g);
        assert!(width_trend_rapid(&empty, 0.0).unwrap().pass);
    }
}
