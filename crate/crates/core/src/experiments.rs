//! Seeded experiment drivers. Each returns an [`Outcome`] with named metrics, a
//! pass flag and a JSON detail record.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::avoidance::{avoidance_check_plane, avoidance_check_unitdisc, right_end_profile, MonotoneSample};
use crate::curve_geometry::{
    c_interval_with, certified_stolz_constant, meets, width_trend_rapid, BoundContext, BoundKind, Branch, CurveFamily,
};
use crate::disc_sets::{gen_cantor_rset, gen_example1, gen_example2, gen_random, horocycle_disc, horocycle_gap};
use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge};
use crate::logderiv::{
    build_exceptional_set, cartan_discs, check_cartan, check_logderiv_bound, check_logderiv_bound_unitdisc,
    check_logdiff_bound, BoundReport, CartanConstruction, ZeroPoleData,
};
use crate::measure::{exceptional_c_measure, monte_carlo_hits, vertical_projection, IntervalUnion};
use crate::numeric::{grid_toward_one, log_grid};
use crate::ComplexPoint;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: String,
    pub pass: bool,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub detail: serde_json::Value,
}

impl Outcome {
    fn new(id: &str) -> Self {
        Outcome { id: id.into(), pass: true, metrics: BTreeMap::new(), notes: vec![], detail: json!({}) }
    }

    fn metric(&mut self, name: &str, v: f64) -> &mut Self {
        self.metrics.insert(name.into(), v);
        self
    }

    /// Records a check; a false check fails the outcome and leaves a note.
    fn check(&mut self, ok: bool, what: impl Into<String>) -> bool {
        if !ok {
            self.pass = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
        ok
    }

    pub fn get(&self, name: &str) -> f64 {
        self.metrics.get(name).copied().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CantorConfig {
    pub levels: usize,
    pub tolerance: f64,
}

impl Default for CantorConfig {
    fn default() -> Self {
        CantorConfig { levels: 12, tolerance: 1e-9 }
    }
}

/// Cantor cover: diameter sum `4(1 - (2/3)^L)` and projection measure `4/3`.
pub fn cantor(cfg: &CantorConfig) -> Result<Outcome> {
    let col = gen_cantor_rset(cfg.levels, None)?;
    let mut out = Outcome::new("cantor");
    let ds = col.diameter_sum();
    let expected = 4.0 * (1.0 - (2.0f64 / 3.0).powi(cfg.levels as i32));
    let m = vertical_projection(&col).measure();
    out.metric("discs", col.len() as f64)
        .metric("diameter_sum", ds)
        .metric("diameter_sum_expected", expected)
        .metric("projection_measure", m);
    out.check((ds - expected).abs() <= cfg.tolerance, "diameter sum");
    out.check((m - 4.0 / 3.0).abs() <= cfg.tolerance, "projection measure");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExamplesConfig {
    pub n_max: usize,
    pub k_max: usize,
}

impl Default for ExamplesConfig {
    fn default() -> Self {
        ExamplesConfig { n_max: 20, k_max: 20 }
    }
}

/// Ray and line examples: diameter sums below and increasing toward 2, and every
/// family curve meeting all of its discs.
pub fn examples(cfg: &ExamplesConfig) -> Result<Outcome> {
    let mut out = Outcome::new("examples");
    let steps = cfg.n_max.min(cfg.k_max);
    for (label, generator) in [("example1", gen_example1 as fn(usize, usize) -> Result<_>), ("example2", gen_example2)] {
        let sums: Vec<f64> = (1..=steps).map(|m| generator(m, m).map(|c| c.diameter_sum())).collect::<Result<_>>()?;
        let last = *sums.last().unwrap();
        out.metric(&format!("{label}_diameter_sum"), last);
        out.check(sums.iter().all(|&s| s < 2.0), format!("{label} diameter sums below 2"));
        out.check(sums.windows(2).all(|w| w[1] > w[0]), format!("{label} diameter sums increasing"));

        let col = generator(cfg.n_max, cfg.k_max)?;
        let (mut missed, mut unresolved) = (0usize, 0usize);
        for n in 1..=cfg.n_max {
            let fam = if label == "example1" {
                CurveFamily::plane(Gauge::identity(), 0.0, (1.0 / n as f64).tan(), Branch::Upper)?
            } else {
                CurveFamily::plane(Gauge::constant(), 0.0, 1.0 / n as f64, Branch::Upper)?
            };
            let family = &col.discs[..];
            for d in family.iter().filter(|d| on_family(label, n, d)) {
                if d.radius < RESOLVABLE * d.modulus() {
                    unresolved += 1;
                } else if !meets(&fam, d) {
                    missed += 1;
                }
            }
        }
        out.metric(&format!("{label}_missed"), missed as f64)
            .metric(&format!("{label}_unresolved"), unresolved as f64);
        out.check(missed == 0, format!("{label} curves meet all their discs"));
    }
    Ok(out)
}

/// Discs with `r < RESOLVABLE·|z|` sit below double resolution of their center and
/// are not tested for meeting.
const RESOLVABLE: f64 = 1e-12;

/// Whether a disc was generated on the `n`-th ray (example 1) or line (example 2).
fn on_family(label: &str, n: usize, d: &crate::Disc) -> bool {
    if label == "example1" {
        (d.center.arg() - 1.0 / n as f64).abs() < 1e-12
    } else {
        (d.center.im - 1.0 / n as f64).abs() < 1e-12
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomPlaneConfig {
    pub count: usize,
    pub epsilon: f64,
    pub envelope_m: f64,
    pub seed: u64,
    pub angle: f64,
    pub mc_samples: usize,
    pub c_range: (f64, f64),
}

impl Default for RandomPlaneConfig {
    fn default() -> Self {
        RandomPlaneConfig {
            count: 500,
            epsilon: 1e-3,
            envelope_m: 1.0,
            seed: 20240601,
            angle: 0.0,
            mc_samples: 10_000,
            c_range: (0.1, 10.0),
        }
    }
}

/// Exceptional c-set of a seeded random plane collection against its measure bound,
/// the per-disc width bound and a Monte Carlo hit count.
pub fn plane_measure(id: &str, gauge: Gauge, cfg: &RandomPlaneConfig) -> Result<Outcome> {
    let col = gen_random(Ambient::Plane, gauge, cfg.count, cfg.epsilon, cfg.envelope_m, cfg.seed)?;
    let rep = exceptional_c_measure(&col, cfg.angle)?;
    let mut out = Outcome::new(id);
    let bound = rep.bound.ok_or_else(|| Error::UnsupportedGauge(gauge.to_string()))?;
    out.metric("tail_sum", col.tail_sum())
        .metric("measure", rep.measure)
        .metric("bound", bound)
        .metric("width_sum", rep.width_sum)
        .metric("per_disc_violations", rep.per_disc_violations.len() as f64)
        .metric("excluded", rep.excluded.len() as f64);
    out.check(col.tail_sum() < cfg.epsilon, "tail budget");
    out.check(rep.measure <= bound, "exceptional measure within bound");
    out.check(rep.per_disc_violations.is_empty(), "per-disc width bound");
    out.check(rep.excluded.is_empty(), "all tail discs in the curve domain");
    let chain = rep.intervals.iter().filter(|r| r.bound_kind == BoundKind::Chain).count();
    out.metric("chain_fallbacks", chain as f64);
    if cfg.mc_samples > 0 {
        let mc = monte_carlo_hits(&col, cfg.angle, cfg.c_range, cfg.mc_samples, bound, cfg.seed ^ 0x5eed)?;
        out.metric("mc_fraction", mc.fraction).metric("mc_limit", mc.bound_ratio + mc.slack);
        out.check(mc.pass, "Monte Carlo hit fraction");
        out.detail = json!({ "monte_carlo": mc });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RapidConfig {
    pub exponent: f64,
    pub count: usize,
    pub epsilon: f64,
    pub envelope_m: f64,
    pub seed: u64,
}

impl Default for RapidConfig {
    fn default() -> Self {
        RapidConfig { exponent: 2.0, count: 500, epsilon: 1e-3, envelope_m: 1.0, seed: 20240602 }
    }
}

/// Tail width trend for a rapid gauge: decreasing envelope with the final width
/// below 10% of the initial one.
pub fn rapid_trend(cfg: &RapidConfig) -> Result<Outcome> {
    let g = Gauge::rapid_power(cfg.exponent)?;
    let col = gen_random(Ambient::Plane, g, cfg.count, cfg.epsilon, cfg.envelope_m, cfg.seed)?;
    let rep = width_trend_rapid(&col, 0.0)?;
    let mut out = Outcome::new("rapid");
    out.metric("initial", rep.initial)
        .metric("final", rep.final_width)
        .metric("ratio", rep.ratio)
        .metric("technical_failures", rep.technical_failures.len() as f64);
    out.check(rep.envelope.windows(2).all(|w| w[1] <= w[0]), "envelope non-increasing");
    out.check(rep.technical_failures.is_empty(), "technical condition");
    out.check(rep.ratio < 0.1, "final width below 10% of initial");
    out.notes.push("width decay stands in for the absence of interior points".into());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HorocycleConfig {
    pub n: usize,
}

impl Default for HorocycleConfig {
    fn default() -> Self {
        HorocycleConfig { n: 100_000 }
    }
}

/// Horocycle collection: `r_n/(1-|z_n|)·log²(1+n) → 8` and the increments of
/// `Σ r_n/√(1-|z_n|)`.
pub fn horocycle(cfg: &HorocycleConfig) -> Result<Outcome> {
    let n = cfg.n;
    if n < 2 {
        return Err(Error::invalid("horocycle needs n >= 2"));
    }
    let mut out = Outcome::new("horocycle");
    let mut partial = 0.0;
    let mut increment = 0.0;
    for m in 1..=n {
        let d = horocycle_disc(m);
        if d.modulus() + d.radius >= 1.0 {
            continue;
        }
        increment = d.radius / horocycle_gap(m).sqrt();
        partial += increment;
    }
    let d = horocycle_disc(n);
    let scaled = d.radius / horocycle_gap(n) * (1.0 + n as f64).ln().powi(2);
    out.metric("scaled_ratio", scaled).metric("partial_sum", partial).metric("tail_increment", increment);
    out.check(((scaled - 8.0) / 8.0).abs() <= 0.01, "scaled ratio within 1% of 8");
    out.check(increment < 1e-6, "tail increment");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StolzConfig {
    pub gammas: Vec<f64>,
    pub count: usize,
    pub epsilon: f64,
    pub aperture: f64,
    pub seed: u64,
}

impl Default for StolzConfig {
    fn default() -> Self {
        StolzConfig { gammas: vec![1.0, 2.0], count: 200, epsilon: 1e-3, aperture: 2.0, seed: 20240603 }
    }
}

/// Stolz-angle collections: per-disc widths against `(4 + 2K) r/(1-|z|)^γ` with the
/// certified comparability constant, and the measure bound `(4 + 2K) ε`.
pub fn stolz(cfg: &StolzConfig) -> Result<Outcome> {
    let mut out = Outcome::new("stolz");
    for (i, &gamma) in cfg.gammas.iter().enumerate() {
        let g = Gauge::unit_stolz_power(gamma)?;
        let col = gen_random(Ambient::UnitDisc, g, cfg.count, cfg.epsilon, cfg.aperture, cfg.seed + i as u64)?;
        let k = certified_stolz_constant(gamma, &col.discs, 0.0);
        let mut violations = 0;
        for (idx, d) in col.discs.iter().enumerate() {
            let rep = c_interval_with(&g, 0.0, d, idx, BoundContext::Stolz { k_comp: k })?;
            if rep.bound_kind != BoundKind::Stolz || !rep.satisfied {
                violations += 1;
            }
        }
        let meas = exceptional_c_measure(&col, 0.0)?;
        let tag = format!("gamma{gamma}");
        out.metric(&format!("{tag}_k"), k)
            .metric(&format!("{tag}_violations"), violations as f64)
            .metric(&format!("{tag}_measure"), meas.measure)
            .metric(&format!("{tag}_bound"), meas.bound.unwrap_or(f64::NAN));
        out.check(violations == 0, format!("γ = {gamma} per-disc bound"));
        out.check(meas.within_bound == Some(true), format!("γ = {gamma} measure bound"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartanConfig {
    pub sets: usize,
    pub max_mu: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CartanConfig {
    fn default() -> Self {
        CartanConfig { sets: 200, max_mu: 50, samples: 1000, seed: 20240604 }
    }
}

/// Seeded point set for the Cartan check: a mix of uniform points and tight
/// clusters in `[-5, 5]²`, with `d` drawn from `[0.05, 5]`.
pub fn cartan_instance(rng: &mut ChaCha8Rng, max_mu: usize) -> (Vec<ComplexPoint>, f64) {
    let mu = rng.gen_range(1..=max_mu);
    let mut pts = Vec::with_capacity(mu);
    while pts.len() < mu {
        let c = ComplexPoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let cluster = rng.gen_range(1..=4usize).min(mu - pts.len());
        let spread = 10f64.powf(rng.gen_range(-4.0..0.0));
        for _ in 0..cluster {
            pts.push(c + ComplexPoint::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)));
        }
    }
    let d = 10f64.powf(rng.gen_range(-1.3..0.7));
    (pts, d)
}

/// Outside samples for one Cartan instance: alternately uniform in the padded box
/// and close to a random point, keeping those outside every disc.
fn cartan_samples(rng: &mut ChaCha8Rng, pts: &[ComplexPoint], d: f64, discs: &[crate::Disc], count: usize) -> Vec<ComplexPoint> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count {
        let z = if i.is_multiple_of(2) {
            ComplexPoint::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0))
        } else {
            let p = pts[rng.gen_range(0..pts.len())];
            p + ComplexPoint::from_polar(rng.gen_range(0.0..3.0 * d), rng.gen_range(0.0..std::f64::consts::TAU))
        };
        i += 1;
        if !discs.iter().any(|c| c.contains(z)) {
            out.push(z);
        }
    }
    out
}

/// Cartan guarantees on seeded point sets.
pub fn cartan(cfg: &CartanConfig) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Outcome::new("cartan");
    let (mut radii_fail, mut violations, mut outside, mut worst_radii) = (0usize, 0usize, 0usize, 0.0f64);
    for _ in 0..cfg.sets {
        let (pts, d) = cartan_instance(&mut rng, cfg.max_mu);
        let discs = cartan_discs(&pts, d);
        let samples = cartan_samples(&mut rng, &pts, d, &discs, cfg.samples);
        let chk = check_cartan(&pts, d, &discs, &samples);
        radii_fail += usize::from(!chk.radii_ok);
        violations += chk.violations.len();
        outside += chk.outside;
        worst_radii = worst_radii.max(chk.radii_sum / (2.0 * d));
    }
    out.metric("sets", cfg.sets as f64)
        .metric("radii_failures", radii_fail as f64)
        .metric("worst_radii_fraction", worst_radii)
        .metric("outside_samples", outside as f64)
        .metric("violations", violations as f64);
    out.check(radii_fail == 0, "radii sum within 2d");
    out.check(violations == 0, "sorted-distance guarantee");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogDerivConfig {
    pub zeros: usize,
    pub radius: f64,
    /// Exponent `a` of the gauge `K(x) = x^a`; 1 selects the identity.
    pub gauge_exponent: f64,
    pub alpha: f64,
    pub k: usize,
    pub j: usize,
    pub samples: usize,
    pub seed: u64,
    /// Shift `c` of the difference estimate.
    pub shift: (f64, f64),
    pub closed_form_tol: f64,
}

impl Default for LogDerivConfig {
    fn default() -> Self {
        LogDerivConfig {
            zeros: 100,
            radius: 50.0,
            gauge_exponent: 0.75,
            alpha: 2.0,
            k: 1,
            j: 0,
            samples: 10_000,
            seed: 20240605,
            shift: (1.0, 0.0),
            closed_form_tol: 1e-6,
        }
    }
}

impl LogDerivConfig {
    pub fn gauge(&self) -> Result<Gauge> {
        if self.gauge_exponent == 1.0 {
            Ok(Gauge::identity())
        } else if self.gauge_exponent == 0.0 {
            Ok(Gauge::constant())
        } else {
            Gauge::concave_power(self.gauge_exponent)
        }
    }

    /// Seeded zeros, uniform by area in `|z| < radius`.
    pub fn function(&self) -> Result<ZeroPoleData> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let zeros: Vec<ComplexPoint> = (0..self.zeros)
            .map(|_| {
                let r = self.radius * rng.gen_range(0.0f64..1.0).sqrt();
                ComplexPoint::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        ZeroPoleData::from_zeros(&zeros)
    }
}

/// Admissible plane samples. Even indices are log-uniform in modulus from `α^{ν₀}`
/// to two annuli past the last disc with uniform argument; odd indices sit just
/// outside a random exceptional disc, where the ratio peaks. With a shift, `z + c`
/// must be admissible as well.
pub fn plane_samples(con: &CartanConstruction, count: usize, seed: u64, shift: Option<ComplexPoint>) -> Vec<ComplexPoint> {
    let lo = con.excluded_radius().ln();
    let hi = con.alpha.powi(con.nu_end as i32 + 2).ln();
    let bulk = |rng: &mut ChaCha8Rng| {
        ComplexPoint::from_polar(rng.gen_range(lo..hi).exp(), rng.gen_range(0.0..std::f64::consts::TAU))
    };
    mixed_samples(con, count, seed, bulk, |z| shift.is_none_or(|c| con.admits(z + c)))
}

fn mixed_samples(
    con: &CartanConstruction,
    count: usize,
    seed: u64,
    bulk: impl Fn(&mut ChaCha8Rng) -> ComplexPoint,
    extra: impl Fn(ComplexPoint) -> bool,
) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let discs = con.discs();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = if out.len() % 2 == 1 && !discs.is_empty() {
            let d = discs[rng.gen_range(0..discs.len())];
            let t = d.radius * (1.0 + 10f64.powf(rng.gen_range(-3.0..0.0)));
            d.center + ComplexPoint::from_polar(t, rng.gen_range(0.0..std::f64::consts::TAU))
        } else {
            bulk(&mut rng)
        };
        if con.admits(z) && extra(z) {
            out.push(z);
        }
    }
    out
}

/// Admissible unit-disc samples: `1 - |z|` log-uniform between `b^{ν₀}` and two
/// annuli past the last disc with uniform argument, alternating with points just
/// outside a random exceptional disc.
pub fn unit_samples(con: &CartanConstruction, count: usize, seed: u64) -> Vec<ComplexPoint> {
    let b = con.b.unwrap_or(0.5);
    let hi = (1.0 - con.excluded_radius()).ln();
    let lo = b.powi(con.nu_end as i32 + 2).ln();
    let bulk = |rng: &mut ChaCha8Rng| {
        let gap = rng.gen_range(lo..hi).exp();
        ComplexPoint::from_polar(1.0 - gap, rng.gen_range(0.0..std::f64::consts::TAU))
    };
    mixed_samples(con, count, seed, bulk, |z| z.norm() < 1.0)
}

fn summarize(out: &mut Outcome, prefix: &str, rep: &BoundReport) {
    out.metric(&format!("{prefix}_samples"), rep.samples.len() as f64)
        .metric(&format!("{prefix}_empirical_c"), rep.empirical_c)
        .metric(&format!("{prefix}_empirical_c_half"), rep.empirical_c_half)
        .metric(&format!("{prefix}_stability"), rep.stability)
        .metric(&format!("{prefix}_violations"), rep.violations.len() as f64);
    out.check(rep.inner_applicable, format!("{prefix} inner chain applicable"));
    out.check(rep.violations.is_empty(), format!("{prefix} inner chain"));
    out.check(rep.stable, format!("{prefix} empirical C stable under sample doubling"));
}

fn construction_summary(out: &mut Outcome, con: &CartanConstruction) {
    out.metric("nu0", con.nu0 as f64)
        .metric("nu_end", con.nu_end as f64)
        .metric("discs", con.disc_count() as f64)
        .metric("weight_sum", con.weight_sum)
        .metric("weight_bound_sum", con.weight_bound_sum);
    out.check(con.weight_ok, "per-annulus weight within the chain bound");
    out.check(con.placement_ok, "disc placement");
    out.check(con.all_side_conditions(), "side conditions from ν₀ on");
    out.check(con.per_annulus.iter().all(|a| a.radii_sum <= 2.0 * a.d_nu), "Cartan radii within 2d_ν");
}

/// Plane logarithmic-derivative experiment: construction, tail-sum closed form,
/// inner chain and empirical constant on `2·samples` admissible points.
pub fn logderiv(cfg: &LogDerivConfig) -> Result<(Outcome, CartanConstruction, BoundReport)> {
    let f = cfg.function()?;
    let g = cfg.gauge()?;
    let con = build_exceptional_set(&f, cfg.j, cfg.alpha, &g, Ambient::Plane, None)?;
    let mut out = Outcome::new("logderiv");
    construction_summary(&mut out, &con);
    // Partial sums of Σ 2α d_ν/K(α^ν) against Σ 2α/(ν^α (log α)^α).
    let (mut a, mut b, mut worst) = (0.0, 0.0, 0.0f64);
    for rec in &con.per_annulus {
        a += rec.weight_bound;
        b += rec.closed_form.unwrap_or(f64::NAN);
        worst = worst.max((a - b).abs());
    }
    out.metric("closed_form_sum", con.closed_form_sum.unwrap_or(f64::NAN)).metric("closed_form_gap", worst);
    out.check(worst <= cfg.closed_form_tol, "tail-sum partial sums match the closed form");
    let zs = plane_samples(&con, 2 * cfg.samples, cfg.seed ^ 0xd1ff, None);
    let rep = check_logderiv_bound(&f, cfg.k, cfg.j, cfg.alpha, &g, &zs, &con)?;
    summarize(&mut out, "logderiv", &rep);
    Ok((out, con, rep))
}

/// Plane logarithmic-difference experiment on the same seeded function.
pub fn logdiff(cfg: &LogDerivConfig) -> Result<(Outcome, BoundReport)> {
    let f = cfg.function()?;
    let g = cfg.gauge()?;
    let con = build_exceptional_set(&f, 0, cfg.alpha, &g, Ambient::Plane, None)?;
    let shift = ComplexPoint::new(cfg.shift.0, cfg.shift.1);
    let mut out = Outcome::new("logdiff");
    construction_summary(&mut out, &con);
    let zs = plane_samples(&con, 2 * cfg.samples, cfg.seed ^ 0xd1f2, Some(shift));
    let rep = check_logdiff_bound(&f, shift, cfg.alpha, &g, &zs, &con)?;
    summarize(&mut out, "logdiff", &rep);
    Ok((out, rep))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitLogDerivConfig {
    pub zeros: usize,
    /// Zero moduli are `1 - 2^{-u}` with `u` uniform in `[1, max_level]`.
    pub max_level: f64,
    /// Exponent `γ >= 1` of `k(x) = x^γ`.
    pub gauge_exponent: f64,
    pub alpha: f64,
    pub b: f64,
    pub k: usize,
    pub j: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for UnitLogDerivConfig {
    fn default() -> Self {
        UnitLogDerivConfig {
            zeros: 60,
            max_level: 12.0,
            gauge_exponent: 1.0,
            alpha: 2.0,
            b: 0.5,
            k: 1,
            j: 0,
            samples: 10_000,
            seed: 20240606,
        }
    }
}

impl UnitLogDerivConfig {
    pub fn function(&self) -> Result<ZeroPoleData> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let zeros: Vec<ComplexPoint> = (0..self.zeros)
            .map(|_| {
                let u: f64 = rng.gen_range(1.0..self.max_level);
                ComplexPoint::from_polar(1.0 - (-u).exp2(), rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        ZeroPoleData::from_zeros(&zeros)
    }
}

/// Unit-disc logarithmic-derivative experiment: a seeded instance plus the
/// Blaschke-type zeros `1 - 2^{-m}` sampled on the circles `1 - (3/4)2^{-m}`.
pub fn logderiv_disc(cfg: &UnitLogDerivConfig) -> Result<(Outcome, BoundReport)> {
    let g = Gauge::unit_stolz_power(cfg.gauge_exponent)?;
    let f = cfg.function()?;
    let con = build_exceptional_set(&f, cfg.j, cfg.alpha, &g, Ambient::UnitDisc, Some(cfg.b))?;
    let mut out = Outcome::new("logderiv_disc");
    construction_summary(&mut out, &con);
    let zs = unit_samples(&con, 2 * cfg.samples, cfg.seed ^ 0xd15c);
    let rep = check_logderiv_bound_unitdisc(&f, cfg.k, cfg.j, cfg.alpha, cfg.b, &g, &zs, &con)?;
    summarize(&mut out, "seeded", &rep);

    let blaschke: Vec<ComplexPoint> = (1..=12).map(|m| ComplexPoint::new(1.0 - 0.5f64.powi(m), 0.0)).collect();
    let fb = ZeroPoleData::from_zeros(&blaschke)?;
    let gi = Gauge::unit_stolz_power(1.0)?;
    let cb = build_exceptional_set(&fb, 0, 2.0, &gi, Ambient::UnitDisc, Some(0.5))?;
    let ring: Vec<ComplexPoint> = (1..=12)
        .flat_map(|m| {
            let r = 1.0 - 0.75 * 0.5f64.powi(m);
            (0..64).map(move |k| ComplexPoint::from_polar(r, std::f64::consts::TAU * k as f64 / 64.0))
        })
        .filter(|z| cb.admits(*z))
        .collect();
    let rb = check_logderiv_bound_unitdisc(&fb, 1, 0, 2.0, 0.5, &gi, &ring, &cb)?;
    out.metric("blaschke_nu0", cb.nu0 as f64)
        .metric("blaschke_samples", ring.len() as f64)
        .metric("blaschke_violations", rb.violations.len() as f64);
    out.check(cb.all_side_conditions() && cb.placement_ok, "Blaschke construction side conditions");
    out.check(!ring.is_empty() && rb.violations.is_empty(), "Blaschke inner chain");
    Ok((out, rep))
}

/// The two synthetic avoidance instances.
pub fn avoidance() -> Result<Outcome> {
    let mut out = Outcome::new("avoidance");

    let e = IntervalUnion::from_intervals([(2.0, 3.0)])?;
    let mut grid: Vec<f64> = (0..=9000).map(|i| 1.0 + i as f64 * 1e-3).collect();
    grid.extend(log_grid(10.0, 1e3, 200).into_iter().skip(1));
    let g = MonotoneSample::from_fn(grid.clone(), |r| right_end_profile(&e, r))?;
    let h = MonotoneSample::from_fn(grid, |r| r)?;
    let rep = avoidance_check_plane(&g, &h, &e, &Gauge::constant(), &|r| 1.0 / r, 1.0)?;
    out.metric("plane_R", rep.r_threshold)
        .metric("plane_checked", rep.checked as f64)
        .metric("plane_violations", rep.violations.len() as f64);
    out.check(rep.pass(), "plane instance");

    let e = unit_avoidance_set(20)?;
    let mut grid = grid_toward_one(1e-8, 0.9, 2000);
    grid.extend(e.intervals().iter().flat_map(|&(lo, hi)| [lo, hi]));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let g = MonotoneSample::from_fn(grid.clone(), |r| right_end_profile(&e, r))?;
    let h = MonotoneSample::from_fn(grid, |r| r)?;
    let rep = avoidance_check_unitdisc(&g, &h, &e, &Gauge::unit_stolz_power(1.0)?, &unit_b_profile)?;
    out.metric("unit_R", rep.r_threshold)
        .metric("unit_checked", rep.checked as f64)
        .metric("unit_violations", rep.violations.len() as f64);
    out.check(rep.pass(), "unit-disc instance");
    Ok(out)
}

/// `E = ∪_{m<=levels} [1 - 2^{-m}, 1 - 2^{-m} + 4^{-m}]`.
pub fn unit_avoidance_set(levels: i32) -> Result<IntervalUnion> {
    IntervalUnion::from_intervals((1..=levels).map(|m| {
        let lo = 1.0 - 0.5f64.powi(m);
        (lo, lo + 0.25f64.powi(m))
    }))
}

/// `b(r) = 1 - min(1/2, √(1 - r))`.
pub fn unit_b_profile(r: f64) -> f64 {
    1.0 - (1.0 - r).sqrt().min(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_defaults_pass() {
        let o = cantor(&CantorConfig::default()).unwrap();
        assert!(o.pass, "{:?}", o.notes);
        assert_eq!(o.get("discs"), 8190.0);
    }

    #[test]
    fn examples_pass() {
        let o = examples(&ExamplesConfig::default()).unwrap();
        assert!(o.pass, "{:?}", o.notes);
    }

    #[test]
    fn avoidance_instances_pass() {
        let o = avoidance().unwrap();
        assert!(o.pass, "{:?} {:?}", o.notes, o.metrics);
    }

    #[test]
    fn small_logderiv_run() {
        let cfg = LogDerivConfig { zeros: 30, samples: 500, ..Default::default() };
        let (o, con, rep) = logderiv(&cfg).unwrap();
        assert!(con.weight_ok && rep.violations.is_empty(), "{:?}", o.notes);
    }
}
