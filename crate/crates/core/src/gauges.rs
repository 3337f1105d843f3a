//! Catalog of gauge functions.
//!
//! A gauge is the profile that both shapes a curve family (`y = ±c·K(x)` in the
//! plane, `|1 - ζ̄z| = c·l(1 - |z|)` in the unit disc) and weights a disc
//! collection (`Σ r_n / K(size_n) < ∞`). The catalog is closed: every kind carries
//! certified doubling constants so downstream width and measure bounds are sound.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_grid, log_plus};

/// Relative tolerance used for every gauge identity check.
pub const GAUGE_REL_TOL: f64 = 1e-12;

/// Number of points in the default verification grid.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Where a disc collection or curve family lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    Plane,
    UnitDisc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GaugeKind {
    /// `K(x) = x`.
    PlaneConcaveIdentity,
    /// `K(x) = x^a`, `0 < a < 1`.
    PlaneConcavePower { a: f64 },
    /// `K(x) = log x`, zero at `x = 1`.
    PlaneConcaveLog,
    /// `K(x) ≡ 1`; the R-set case.
    PlaneConstant,
    /// `L(x) = x^(-p)`, `p > 0`.
    PlaneConvexPower { p: f64 },
    /// `ℒ(x) = x^p`, `p > 1`.
    PlaneRapidPower { p: f64 },
    /// `ℒ(x) = x·log(1 + x)`.
    PlaneRapidXLog,
    /// `l(x) = x^a`, `0 < a < 1`.
    UnitConcavePower { a: f64 },
    /// `k(x) = x^a`, `a > 1`.
    UnitConvexPower { a: f64 },
    /// `k(x) = x^γ`, `γ >= 1`; Stolz angle (`γ = 1`) and zero angles.
    UnitStolzPower { gamma: f64 },
    /// `x ↦ exp(-1/x)`: fails the doubling-type limit. Diagnostics only.
    UnitExpInverse,
}

/// Shape class of a gauge, which decides the applicable theorem and bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeClass {
    PlaneConcave,
    PlaneConstant,
    PlaneConvexDecreasing,
    PlaneRapid,
    UnitConcave,
    UnitConvex,
    UnitOther,
}

impl GaugeClass {
    pub fn ambient(self) -> Ambient {
        match self {
            GaugeClass::PlaneConcave
            | GaugeClass::PlaneConstant
            | GaugeClass::PlaneConvexDecreasing
            | GaugeClass::PlaneRapid => Ambient::Plane,
            _ => Ambient::UnitDisc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GaugeRecord", into = "GaugeRecord")]
pub struct Gauge {
    pub kind: GaugeKind,
    /// Zero of the gauge (`K(x0) = 0`); lower end of the plane domain.
    pub x0: f64,
    /// Radius beyond which the doubling condition holds.
    pub r_threshold: f64,
    /// Doubling constant `α` (`K(2x) <= α K(x)`); `1` for the constant and rapid kinds.
    pub alpha: Option<f64>,
    /// Decreasing doubling constant `β` (`L(2x) >= β L(x)`).
    pub beta: Option<f64>,
    /// Unit-disc doubling-type limit at `γ = 1`.
    pub tau: Option<f64>,
}

impl Gauge {
    fn base(kind: GaugeKind) -> Self {
        Gauge { kind, x0: 0.0, r_threshold: 1.0, alpha: None, beta: None, tau: None }
    }

    pub fn identity() -> Self {
        Gauge { alpha: Some(2.0), ..Self::base(GaugeKind::PlaneConcaveIdentity) }
    }

    pub fn concave_power(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::invalid(format!("concave power exponent {a} not in (0, 1)")));
        }
        Ok(Gauge { alpha: Some(a.exp2()), ..Self::base(GaugeKind::PlaneConcavePower { a }) })
    }

    /// `log x` with doubling constant `α = 2`, valid from `R = 2`.
    pub fn log() -> Self {
        Self::log_with_alpha(2.0).expect("alpha = 2 is admissible")
    }

    /// `log x` certified with a chosen `α ∈ (1, 2]`; `log(2x) <= α log x` holds for
    /// `x >= 2^(1/(α-1))`.
    pub fn log_with_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("log gauge alpha {alpha} not in (1, 2]")));
        }
        Ok(Gauge {
            x0: 1.0,
            r_threshold: (1.0 / (alpha - 1.0)).exp2(),
            alpha: Some(alpha),
            ..Self::base(GaugeKind::PlaneConcaveLog)
        })
    }

    pub fn constant() -> Self {
        Gauge { alpha: Some(1.0), ..Self::base(GaugeKind::PlaneConstant) }
    }

    pub fn convex_power(p: f64) -> Result<Self> {
        if !(p > 0.0) {
            return Err(Error::invalid(format!("convex power exponent {p} must be positive")));
        }
        Ok(Gauge { beta: Some((-p).exp2()), ..Self::base(GaugeKind::PlaneConvexPower { p }) })
    }

    pub fn rapid_power(p: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::invalid(format!("rapid power exponent {p} must exceed 1")));
        }
        Ok(Gauge { alpha: Some(1.0), ..Self::base(GaugeKind::PlaneRapidPower { p }) })
    }

    pub fn rapid_xlog() -> Self {
        // x·log(1 + x) >= 1 from x ≈ 1.2556 on.
        Gauge { r_threshold: 1.3, alpha: Some(1.0), ..Self::base(GaugeKind::PlaneRapidXLog) }
    }

    pub fn unit_concave_power(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::invalid(format!("unit concave exponent {a} not in (0, 1)")));
        }
        Ok(Gauge { tau: Some(1.0), ..Self::base(GaugeKind::UnitConcavePower { a }) })
    }

    pub fn unit_convex_power(a: f64) -> Result<Self> {
        if !(a > 1.0) {
            return Err(Error::invalid(format!("unit convex exponent {a} must exceed 1")));
        }
        Ok(Gauge { tau: Some(1.0), ..Self::base(GaugeKind::UnitConvexPower { a }) })
    }

    pub fn unit_stolz_power(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) {
            return Err(Error::invalid(format!("Stolz exponent {gamma} must be >= 1")));
        }
        Ok(Gauge { tau: Some(1.0), ..Self::base(GaugeKind::UnitStolzPower { gamma }) })
    }

    pub fn unit_exp_inverse() -> Self {
        Self::base(GaugeKind::UnitExpInverse)
    }

    pub fn class(&self) -> GaugeClass {
        match self.kind {
            GaugeKind::PlaneConcaveIdentity
            | GaugeKind::PlaneConcavePower { .. }
            | GaugeKind::PlaneConcaveLog => GaugeClass::PlaneConcave,
            GaugeKind::PlaneConstant => GaugeClass::PlaneConstant,
            GaugeKind::PlaneConvexPower { .. } => GaugeClass::PlaneConvexDecreasing,
            GaugeKind::PlaneRapidPower { .. } | GaugeKind::PlaneRapidXLog => GaugeClass::PlaneRapid,
            GaugeKind::UnitConcavePower { .. } => GaugeClass::UnitConcave,
            GaugeKind::UnitConvexPower { .. } | GaugeKind::UnitStolzPower { .. } => GaugeClass::UnitConvex,
            GaugeKind::UnitExpInverse => GaugeClass::UnitOther,
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.class().ambient()
    }

    /// Whether `x` lies in the gauge's domain.
    pub fn in_domain(&self, x: f64) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self.kind {
            GaugeKind::PlaneConvexPower { .. } => x > 0.0,
            GaugeKind::PlaneConstant => x >= 0.0,
            GaugeKind::PlaneRapidPower { .. } | GaugeKind::PlaneRapidXLog => x >= 0.0,
            GaugeKind::PlaneConcaveIdentity | GaugeKind::PlaneConcavePower { .. } | GaugeKind::PlaneConcaveLog => {
                x >= self.x0
            }
            _ => x > 0.0 && x < 1.0,
        }
    }

    /// Gauge value without the domain check. Callers must stay in the domain.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        match self.kind {
            GaugeKind::PlaneConcaveIdentity => x,
            GaugeKind::PlaneConcavePower { a } => x.powf(a),
            GaugeKind::PlaneConcaveLog => x.ln(),
            GaugeKind::PlaneConstant => 1.0,
            GaugeKind::PlaneConvexPower { p } => x.powf(-p),
            GaugeKind::PlaneRapidPower { p } => x.powf(p),
            GaugeKind::PlaneRapidXLog => x * x.ln_1p(),
            GaugeKind::UnitConcavePower { a } | GaugeKind::UnitConvexPower { a } => x.powf(a),
            GaugeKind::UnitStolzPower { gamma } => x.powf(gamma),
            GaugeKind::UnitExpInverse => (-1.0 / x).exp(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.in_domain(x) {
            return Err(Error::Domain { gauge: self.to_string(), value: x });
        }
        Ok(self.value(x))
    }

    /// First abscissa of the plane curves `y = ±c·g(x)`: the zero `x0`.
    pub fn curve_start(&self) -> f64 {
        match self.ambient() {
            Ambient::Plane => self.x0,
            Ambient::UnitDisc => 0.0,
        }
    }

    /// Whether the gauge is increasing (true for all but the decreasing convex and constant kinds).
    pub fn is_increasing(&self) -> bool {
        !matches!(self.class(), GaugeClass::PlaneConvexDecreasing | GaugeClass::PlaneConstant)
    }

    /// Default 512-point logarithmic grid of gauge arguments.
    pub fn default_grid(&self) -> Vec<f64> {
        match self.ambient() {
            Ambient::Plane => {
                let lo = self.r_threshold.max(self.x0 + 1.0).max(1.0);
                log_grid(lo, lo * 1e6, DEFAULT_GRID_POINTS)
            }
            Ambient::UnitDisc => log_grid(1e-9, 0.99, DEFAULT_GRID_POINTS),
        }
    }

    /// Monotonicity and curvature checked by first and second divided differences.
    pub fn shape_report(&self, grid: &[f64]) -> Result<ShapeReport> {
        check_grid(grid)?;
        let vals = grid.iter().map(|&x| self.eval(x)).collect::<Result<Vec<_>>>()?;
        let slopes: Vec<f64> = grid
            .windows(2)
            .zip(vals.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect();
        let scale = |a: f64, b: f64| GAUGE_REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        let monotone = match self.class() {
            GaugeClass::PlaneConstant => slopes.iter().all(|&s| s == 0.0),
            GaugeClass::PlaneConvexDecreasing => vals.windows(2).all(|v| v[1] < v[0]),
            _ => vals.windows(2).all(|v| v[1] > v[0]),
        };
        let curvature_ok = match self.class() {
            GaugeClass::PlaneConcave | GaugeClass::UnitConcave | GaugeClass::PlaneConstant => {
                slopes.windows(2).all(|s| s[1] <= s[0] + scale(s[0], s[1]))
            }
            GaugeClass::UnitOther => true,
            _ => slopes.windows(2).all(|s| s[1] + scale(s[0], s[1]) >= s[0]),
        };
        Ok(ShapeReport { monotone, curvature_ok })
    }

    /// Checks `g(2x) <= α g(x)` (concave, constant) or `g(2x) >= β g(x)` (decreasing
    /// convex) on the grid against `candidate`.
    pub fn verify_doubling(&self, grid: &[f64], candidate: f64) -> Result<DoublingReport> {
        check_grid(grid)?;
        if let Some(&x) = grid.iter().find(|&&x| x < self.r_threshold) {
            return Err(Error::invalid(format!("grid point {x} below the doubling threshold {}", self.r_threshold)));
        }
        let class = self.class();
        let decreasing = match class {
            GaugeClass::PlaneConcave | GaugeClass::PlaneConstant => false,
            GaugeClass::PlaneConvexDecreasing => true,
            _ => return Err(Error::UnsupportedGauge(self.to_string())),
        };

        let mut notes = Vec::new();
        let mut passes = Vec::with_capacity(grid.len());
        let mut empirical = if decreasing { f64::INFINITY } else { f64::NEG_INFINITY };
        for &x in grid {
            let (g1, g2) = (self.value(x), self.value(2.0 * x));
            let ratio = g2 / g1;
            let ok = if decreasing {
                empirical = empirical.min(ratio);
                g2 >= candidate * g1 * (1.0 - GAUGE_REL_TOL)
            } else {
                empirical = empirical.max(ratio);
                g2 <= candidate * g1 * (1.0 + GAUGE_REL_TOL)
            };
            passes.push(ok);
        }
        let all_pass = passes.iter().all(|&p| p);
        let threshold = passes.iter().rposition(|&p| !p).map_or(Some(grid[0]), |i| grid.get(i + 1).copied());

        let permitted = match class {
            GaugeClass::PlaneConcave => candidate > 1.0 && candidate <= 2.0,
            GaugeClass::PlaneConvexDecreasing => candidate > 0.0 && candidate < 1.0,
            _ => false,
        };
        if class == GaugeClass::PlaneConstant {
            notes.push("non-permitted extremal value α=1 works for constant functions only".to_string());
        } else if class == GaugeClass::PlaneConcave && candidate > 2.0 {
            notes.push(format!("α = {candidate} exceeds the cap α <= 2 imposed by K(x) = O(x)"));
        }

        // Growth cap K(x) <= α^N K(R) with R 2^(N-1) <= x <= R 2^N.
        let growth_cap_ok = if class == GaugeClass::PlaneConcave && all_pass {
            let kr = self.value(self.r_threshold);
            Some(grid.iter().all(|&x| {
                let n = (x / self.r_threshold).log2().ceil().max(0.0);
                self.value(x) <= candidate.powf(n) * kr * (1.0 + GAUGE_REL_TOL)
            }))
        } else {
            None
        };

        Ok(DoublingReport {
            grid: grid.to_vec(),
            passes,
            all_pass,
            candidate,
            empirical_constant: empirical,
            threshold,
            growth_cap_ok,
            permitted,
            notes,
        })
    }

    /// Empirical limits of the doubling-type ratios along `grid`:
    /// `g(1-x) / g((1-x)(γ ± δ(x)))` for unit gauges (grid `x → 1⁻`) and
    /// `ℒ(x) / ℒ(x(1 ± δ(x)))` for rapid plane gauges (grid `x → ∞`).
    pub fn verify_doubling_type(&self, delta: &dyn Fn(f64) -> f64, gamma: f64, grid: &[f64]) -> Result<LimitReport> {
        check_grid(grid)?;
        if !(gamma > 0.0) {
            return Err(Error::invalid("gamma must be positive"));
        }
        let (minus, plus): (Vec<f64>, Vec<f64>) = match self.class() {
            GaugeClass::UnitConcave | GaugeClass::UnitConvex | GaugeClass::UnitOther => grid
                .iter()
                .map(|&x| {
                    let u = 1.0 - x;
                    let d = delta(x);
                    (self.ratio_or_nan(u, u * (gamma - d)), self.ratio_or_nan(u, u * (gamma + d)))
                })
                .unzip(),
            GaugeClass::PlaneRapid => grid
                .iter()
                .map(|&x| {
                    let d = delta(x);
                    (self.ratio_or_nan(x, x * (1.0 - d)), self.ratio_or_nan(x, x * (1.0 + d)))
                })
                .unzip(),
            _ => return Err(Error::UnsupportedGauge(self.to_string())),
        };
        let lower = LimitSeries::new("ratio_minus", minus, true);
        let upper = LimitSeries::new("ratio_plus", plus, true);
        let agree = (lower.estimate - upper.estimate).abs() <= 1e-3 * lower.estimate.abs().max(1.0);
        let converged = lower.converged && upper.converged && agree && lower.estimate > 0.0;
        Ok(LimitReport { grid: grid.to_vec(), series: vec![lower, upper], converged, partial: true })
    }

    /// Trajectory of `x/ℒ(x)` (plane, grid → ∞) or `(1-x)/g(1-x)` (unit, grid → 1⁻).
    pub fn limit_diagnostics(&self, grid: &[f64]) -> Result<LimitReport> {
        check_grid(grid)?;
        let (label, values): (&str, Vec<f64>) = match self.ambient() {
            Ambient::Plane => ("x_over_gauge", grid.iter().map(|&x| x / self.value(x)).collect()),
            Ambient::UnitDisc => (
                "gap_over_gauge",
                grid.iter()
                    .map(|&x| {
                        let u = 1.0 - x;
                        u / self.value(u)
                    })
                    .collect(),
            ),
        };
        let series = LimitSeries::new(label, values, false);
        let converged = series.converged;
        Ok(LimitReport { grid: grid.to_vec(), series: vec![series], converged, partial: false })
    }

    fn ratio_or_nan(&self, num_arg: f64, den_arg: f64) -> f64 {
        if self.in_domain(num_arg) && self.in_domain(den_arg) {
            self.value(num_arg) / self.value(den_arg)
        } else {
            f64::NAN
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GaugeKind::PlaneConcaveIdentity => write!(f, "K(x)=x"),
            GaugeKind::PlaneConcavePower { a } => write!(f, "K(x)=x^{a}"),
            GaugeKind::PlaneConcaveLog => write!(f, "K(x)=log x"),
            GaugeKind::PlaneConstant => write!(f, "K(x)=1"),
            GaugeKind::PlaneConvexPower { p } => write!(f, "L(x)=x^-{p}"),
            GaugeKind::PlaneRapidPower { p } => write!(f, "ℒ(x)=x^{p}"),
            GaugeKind::PlaneRapidXLog => write!(f, "ℒ(x)=x log(1+x)"),
            GaugeKind::UnitConcavePower { a } => write!(f, "l(x)=x^{a}"),
            GaugeKind::UnitConvexPower { a } => write!(f, "k(x)=x^{a}"),
            GaugeKind::UnitStolzPower { gamma } => write!(f, "k(x)=x^{gamma} (Stolz)"),
            GaugeKind::UnitExpInverse => write!(f, "exp(-1/x)"),
        }
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("grid must be strictly increasing"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub monotone: bool,
    pub curvature_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub grid: Vec<f64>,
    pub passes: Vec<bool>,
    pub all_pass: bool,
    pub candidate: f64,
    /// `max g(2x)/g(x)` (or `min` for decreasing gauges) over the grid.
    pub empirical_constant: f64,
    /// Smallest grid point from which every later point passes.
    pub threshold: Option<f64>,
    /// Derived cap `K(x) <= α^N K(R)`; concave gauges only.
    pub growth_cap_ok: Option<bool>,
    /// Candidate lies in the admissible range (`1 < α <= 2`, `0 < β < 1`).
    pub permitted: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
}

impl Trend {
    pub fn of(values: &[f64]) -> Trend {
        let (mut up, mut down) = (false, false);
        for w in values.windows(2) {
            if w[1] > w[0] {
                up = true;
            } else if w[1] < w[0] {
                down = true;
            }
        }
        match (up, down) {
            (false, false) => Trend::Constant,
            (true, false) => Trend::Increasing,
            (false, true) => Trend::Decreasing,
            (true, true) => Trend::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSeries {
    pub label: String,
    pub values: Vec<f64>,
    /// Last grid value, the limit estimate.
    pub estimate: f64,
    /// Values finite and successive differences shrinking over the second half.
    pub converged: bool,
    pub trend: Trend,
}

impl LimitSeries {
    fn new(label: &str, values: Vec<f64>, require_small_step: bool) -> Self {
        let estimate = values.last().copied().unwrap_or(f64::NAN);
        let finite = values.iter().all(|v| v.is_finite());
        let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let tail = &diffs[diffs.len() / 2..];
        let shrinking = tail.windows(2).all(|d| d[1] <= d[0] * (1.0 + 1e-9) + 1e-15);
        let small = !require_small_step || diffs.last().is_none_or(|&d| d <= 1e-3 * estimate.abs().max(1.0));
        LimitSeries {
            label: label.to_string(),
            trend: Trend::of(&values),
            converged: finite && shrinking && small,
            estimate,
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub grid: Vec<f64>,
    pub series: Vec<LimitSeries>,
    pub converged: bool,
    /// The property quantifies over every vanishing δ; only finitely many were checked.
    pub partial: bool,
}

/// Canonical vanishing profiles used for the doubling-type checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaProfile {
    /// `1/x` (plane), `1 - x` (unit).
    Inverse,
    /// `1/√x` (plane), `√(1 - x)` (unit).
    InverseSqrt,
    /// `1/log x` (plane), `1/log(1/(1 - x))` (unit).
    InverseLog,
}

impl DeltaProfile {
    pub const ALL: [DeltaProfile; 3] = [DeltaProfile::Inverse, DeltaProfile::InverseSqrt, DeltaProfile::InverseLog];

    pub fn eval(self, ambient: Ambient, x: f64) -> f64 {
        match (ambient, self) {
            (Ambient::Plane, DeltaProfile::Inverse) => 1.0 / x,
            (Ambient::Plane, DeltaProfile::InverseSqrt) => 1.0 / x.sqrt(),
            (Ambient::Plane, DeltaProfile::InverseLog) => 1.0 / x.ln(),
            (Ambient::UnitDisc, DeltaProfile::Inverse) => 1.0 - x,
            (Ambient::UnitDisc, DeltaProfile::InverseSqrt) => (1.0 - x).sqrt(),
            (Ambient::UnitDisc, DeltaProfile::InverseLog) => 1.0 / (-(1.0 - x).ln()),
        }
    }
}

/// Runs [`Gauge::verify_doubling_type`] for each canonical profile.
pub fn verify_doubling_type_canonical(g: &Gauge, gamma: f64, grid: &[f64]) -> Result<Vec<(DeltaProfile, LimitReport)>> {
    let ambient = g.ambient();
    DeltaProfile::ALL
        .iter()
        .map(|&p| Ok((p, g.verify_doubling_type(&|x| p.eval(ambient, x), gamma, grid)?)))
        .collect()
}

/// `log⁺` of a gauge value, handy for report columns.
pub fn log_plus_gauge(g: &Gauge, x: f64) -> f64 {
    log_plus(g.value(x))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GaugeRecord {
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    #[serde(default)]
    x0: Option<f64>,
    #[serde(rename = "R", default)]
    r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
}

impl From<Gauge> for GaugeRecord {
    fn from(g: Gauge) -> Self {
        let mut params = BTreeMap::new();
        let kind = match g.kind {
            GaugeKind::PlaneConcaveIdentity => "plane_concave_identity",
            GaugeKind::PlaneConcavePower { a } => {
                params.insert("a".to_string(), a);
                "plane_concave_power"
            }
            GaugeKind::PlaneConcaveLog => "plane_concave_log",
            GaugeKind::PlaneConstant => "plane_constant",
            GaugeKind::PlaneConvexPower { p } => {
                params.insert("p".to_string(), p);
                "plane_convex_power"
            }
            GaugeKind::PlaneRapidPower { p } => {
                params.insert("p".to_string(), p);
                "plane_rapid_power"
            }
            GaugeKind::PlaneRapidXLog => "plane_rapid_xlog",
            GaugeKind::UnitConcavePower { a } => {
                params.insert("a".to_string(), a);
                "unit_concave_power"
            }
            GaugeKind::UnitConvexPower { a } => {
                params.insert("a".to_string(), a);
                "unit_convex_power"
            }
            GaugeKind::UnitStolzPower { gamma } => {
                params.insert("gamma".to_string(), gamma);
                "unit_stolz_power"
            }
            GaugeKind::UnitExpInverse => "unit_exp_inverse",
        };
        GaugeRecord {
            kind: kind.to_string(),
            params,
            x0: Some(g.x0),
            r: Some(g.r_threshold),
            alpha: g.alpha,
            beta: g.beta,
            tau: g.tau,
        }
    }
}

impl TryFrom<GaugeRecord> for Gauge {
    type Error = Error;

    fn try_from(rec: GaugeRecord) -> Result<Self> {
        let param = |name: &str| {
            rec.params
                .get(name)
                .copied()
                .ok_or_else(|| Error::invalid(format!("gauge kind {} needs param {name}", rec.kind)))
        };
        let mut g = match rec.kind.as_str() {
            "plane_concave_identity" => Gauge::identity(),
            "plane_concave_power" => Gauge::concave_power(param("a")?)?,
            "plane_concave_log" => match rec.alpha {
                Some(alpha) => Gauge::log_with_alpha(alpha)?,
                None => Gauge::log(),
            },
            "plane_constant" => Gauge::constant(),
            "plane_convex_power" => Gauge::convex_power(param("p")?)?,
            "plane_rapid_power" => Gauge::rapid_power(param("p")?)?,
            "plane_rapid_xlog" => Gauge::rapid_xlog(),
            "unit_concave_power" => Gauge::unit_concave_power(param("a")?)?,
            "unit_convex_power" => Gauge::unit_convex_power(param("a")?)?,
            "unit_stolz_power" => Gauge::unit_stolz_power(param("gamma")?)?,
            "unit_exp_inverse" => Gauge::unit_exp_inverse(),
            other => return Err(Error::invalid(format!("unknown gauge kind {other}"))),
        };
        if let Some(x0) = rec.x0 {
            g.x0 = x0;
        }
        if let Some(r) = rec.r {
            if !(r >= 1.0) {
                return Err(Error::invalid(format!("gauge threshold R = {r} must be >= 1")));
            }
            g.r_threshold = r;
        }
        if rec.alpha.is_some() {
            g.alpha = rec.alpha;
        }
        if rec.beta.is_some() {
            g.beta = rec.beta;
        }
        if rec.tau.is_some() {
            g.tau = rec.tau;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::grid_toward_one;

    #[test]
    fn eval_examples() {
        assert_eq!(Gauge::identity().eval(2.0).unwrap(), 2.0);
        assert_eq!(Gauge::concave_power(0.5).unwrap().eval(4.0).unwrap(), 2.0);
        let k = Gauge::unit_convex_power(2.0).unwrap();
        assert!((k.eval(0.1).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_domain_violations() {
        assert!(matches!(Gauge::unit_concave_power(0.5).unwrap().eval(1.0), Err(Error::Domain { .. })));
        assert!(matches!(Gauge::log().eval(0.5), Err(Error::Domain { .. })));
        assert!(matches!(Gauge::convex_power(1.0).unwrap().eval(0.0), Err(Error::Domain { .. })));
        assert!(Gauge::concave_power(1.5).is_err());
    }

    #[test]
    fn sqrt_doubling_is_exact() {
        let g = Gauge::concave_power(0.5).unwrap();
        let grid: Vec<f64> = (1..=100).map(f64::from).collect();
        let rep = g.verify_doubling(&grid, 2f64.sqrt()).unwrap();
        assert!(rep.all_pass);
        assert!(rep.permitted);
        assert!((rep.empirical_constant - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.growth_cap_ok, Some(true));
    }

    #[test]
    fn log_doubling_threshold_is_two_to_the_tenth() {
        // log(2x) <= 1.1 log x  <=>  x >= 2^10.
        let g = Gauge::log();
        let grid = log_grid(10.0, 1e5, 400);
        let rep = g.verify_doubling(&grid, 1.1).unwrap();
        for (x, pass) in grid.iter().zip(&rep.passes) {
            assert_eq!(*pass, *x >= 1024.0 * (1.0 - 1e-9), "x = {x}");
        }
        let t = rep.threshold.unwrap();
        assert!((1024.0..1024.0 * 1.03).contains(&t));
        let short = log_grid(10.0, 1000.0, 50);
        assert!(g.verify_doubling(&short, 1.1).unwrap().passes.iter().all(|p| !p));
    }

    #[test]
    fn constant_doubling_is_informational() {
        let rep = Gauge::constant().verify_doubling(&[1.0, 2.0, 3.0], 1.0).unwrap();
        assert!(rep.all_pass);
        assert!(!rep.permitted);
        assert!(rep.notes[0].contains("constant functions only"));
    }

    #[test]
    fn convex_doubling_uses_beta() {
        let g = Gauge::convex_power(1.0).unwrap();
        let rep = g.verify_doubling(&log_grid(1.0, 1e4, 64), 0.5).unwrap();
        assert!(rep.all_pass);
        assert!((rep.empirical_constant - 0.5).abs() < 1e-12);
    }

    #[test]
    fn doubling_errors() {
        assert!(matches!(Gauge::identity().verify_doubling(&[], 2.0), Err(Error::InvalidInput(_))));
        assert!(matches!(
            Gauge::unit_concave_power(0.5).unwrap().verify_doubling(&[2.0], 2.0),
            Err(Error::UnsupportedGauge(_))
        ));
    }

    #[test]
    fn doubling_at_most_two_for_concave_kinds() {
        for g in [Gauge::identity(), Gauge::concave_power(0.3).unwrap(), Gauge::log()] {
            let grid = g.default_grid();
            for &x in &grid {
                assert!(g.value(2.0 * x) <= 2.0 * g.value(x) * (1.0 + GAUGE_REL_TOL));
            }
        }
    }

    #[test]
    fn unit_concave_doubling_type_limits_to_one() {
        let g = Gauge::unit_concave_power(0.5).unwrap();
        let grid = grid_toward_one(1e-12, 0.1, 64);
        let rep = g.verify_doubling_type(&|x| (1.0 - x).sqrt(), 1.0, &grid).unwrap();
        assert!(rep.converged);
        for s in &rep.series {
            assert!((s.estimate - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn rapid_power_doubling_type_limits_to_one() {
        let g = Gauge::rapid_power(2.0).unwrap();
        let grid = log_grid(10.0, 1e8, 64);
        let rep = g.verify_doubling_type(&|x| 1.0 / x, 1.0, &grid).unwrap();
        assert!(rep.converged);
        assert!((rep.series[0].estimate - 1.0).abs() < 1e-6);
        let all = verify_doubling_type_canonical(&g, 1.0, &grid).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().take(2).all(|(_, r)| r.converged));
    }

    #[test]
    fn exp_inverse_fails_doubling_type() {
        let g = Gauge::unit_exp_inverse();
        let grid = grid_toward_one(1e-8, 0.1, 64);
        let rep = g.verify_doubling_type(&|x| (1.0 - x).sqrt(), 1.0, &grid).unwrap();
        assert!(!rep.converged);
    }

    #[test]
    fn doubling_type_rejects_concave_plane() {
        assert!(matches!(
            Gauge::identity().verify_doubling_type(&|x| 1.0 / x, 1.0, &[2.0, 3.0]),
            Err(Error::UnsupportedGauge(_))
        ));
    }

    #[test]
    fn limit_diagnostics_examples() {
        let rapid = Gauge::rapid_power(2.0).unwrap();
        let grid = log_grid(10.0, 1e4, 32);
        let rep = rapid.limit_diagnostics(&grid).unwrap();
        assert_eq!(rep.series[0].trend, Trend::Decreasing);
        assert!((rep.series[0].estimate - 1e-4).abs() < 1e-16);

        let toward_one = grid_toward_one(1e-10, 0.5, 32);
        let l = Gauge::unit_concave_power(0.5).unwrap().limit_diagnostics(&toward_one).unwrap();
        assert_eq!(l.series[0].trend, Trend::Decreasing);
        assert!((l.series[0].estimate - 1e-5).abs() < 1e-9);

        let k = Gauge::unit_convex_power(2.0).unwrap().limit_diagnostics(&toward_one).unwrap();
        assert_eq!(k.series[0].trend, Trend::Increasing);
        assert!(k.series[0].estimate > 1e9);
    }

    #[test]
    fn shape_reports_match_kinds() {
        for g in [
            Gauge::identity(),
            Gauge::concave_power(0.5).unwrap(),
            Gauge::log(),
            Gauge::convex_power(1.0).unwrap(),
            Gauge::rapid_power(2.0).unwrap(),
            Gauge::rapid_xlog(),
            Gauge::unit_concave_power(0.5).unwrap(),
            Gauge::unit_convex_power(2.0).unwrap(),
            Gauge::unit_stolz_power(1.0).unwrap(),
        ] {
            let rep = g.shape_report(&g.default_grid()).unwrap();
            assert!(rep.monotone, "{g}");
            assert!(rep.curvature_ok, "{g}");
        }
    }

    #[test]
    fn json_shape() {
        let g = Gauge::concave_power(0.5).unwrap();
        let v = serde_json::to_value(g).unwrap();
        assert_eq!(v["kind"], "plane_concave_power");
        assert_eq!(v["params"]["a"], 0.5);
        assert_eq!(v["R"], 1.0);
        assert!((v["alpha"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let back: Gauge = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
        let bad = serde_json::json!({"kind": "spiral", "x0": 0.0, "R": 1.0});
        assert!(serde_json::from_value::<Gauge>(bad).is_err());
    }
}
