//! Exceptional discs for the logarithmic-derivative estimates: Cartan discs built
//! annulus by annulus from the zeros and poles of `f^{(j)}`.

use serde::Serialize;

use super::cartan::cartan_discs;
use super::rational::ZeroPoleData;
use crate::disc_sets::{Disc, DiscCollection};
use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge, GaugeClass, GaugeKind};
use crate::ComplexPoint;

/// Annuli scanned past the last one that can still carry a disc.
const NU_LIMIT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusRecord {
    pub nu: u32,
    /// Inner and outer radius of `𝒜_ν`.
    pub inner: f64,
    pub outer: f64,
    pub mu_nu: u64,
    pub d_nu: f64,
    /// Cartan discs meeting `𝒜_ν`.
    pub discs: Vec<Disc>,
    pub radii_sum: f64,
    /// `Σ r_n / gauge(size_n)` over the retained discs.
    pub weight: f64,
    /// Per-annulus bound on `weight` from the proof's chain.
    pub weight_bound: f64,
    /// Plane only: `2α/(ν^α (log α)^α)`.
    pub closed_form: Option<f64>,
}

/// Proof side conditions evaluated at one `ν`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideConditions {
    pub nu: u32,
    /// Plane: `α^ν > 4 d_ν`. Unit disc: `4 d_ν < b^{ν+1}`.
    pub small_discs: bool,
    /// Unit disc: `b^{ν+1} < 1 - b^ν`. Plane: `α^ν >= 2R` (doubling regime).
    pub regime: bool,
    /// `μ_ν = 0` or `log μ_ν` at least the chain threshold.
    pub counting: bool,
}

impl SideConditions {
    pub fn all(&self) -> bool {
        self.small_discs && self.regime && self.counting
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CartanConstruction {
    pub ambient: Ambient,
    pub alpha: f64,
    /// Unit-disc annulus ratio.
    pub b: Option<f64>,
    pub gauge: Gauge,
    pub j: usize,
    pub nu0: u32,
    /// Last annulus that can carry a disc.
    pub nu_end: u32,
    /// Smallest `l` with `2^l >= α`.
    pub l_exponent: u32,
    pub per_annulus: Vec<AnnulusRecord>,
    pub side_conditions: Vec<SideConditions>,
    pub weight_sum: f64,
    pub weight_bound_sum: f64,
    pub closed_form_sum: Option<f64>,
    pub weight_ok: bool,
    /// The counting condition holds from `ν₀` on.
    pub counting_ok: bool,
    /// Plane: origin outside every retained disc. Unit disc: every disc inside 𝔻.
    pub placement_ok: bool,
    /// Zeros and poles of `f^{(j)}` the discs were built from.
    #[serde(skip)]
    pub derivative_data: ZeroPoleData,
}

impl CartanConstruction {
    pub fn discs(&self) -> Vec<Disc> {
        self.per_annulus.iter().flat_map(|a| a.discs.iter().copied()).collect()
    }

    pub fn disc_count(&self) -> usize {
        self.per_annulus.iter().map(|a| a.discs.len()).sum()
    }

    /// Radius of the excluded central disc: `α^{ν₀}` or `1 - b^{ν₀}`.
    pub fn excluded_radius(&self) -> f64 {
        match self.b {
            None => self.alpha.powi(self.nu0 as i32),
            Some(b) => 1.0 - b.powi(self.nu0 as i32),
        }
    }

    /// Indices of the retained discs containing `z`.
    pub fn containing(&self, z: ComplexPoint) -> Vec<usize> {
        self.discs().iter().enumerate().filter(|(_, d)| d.contains(z)).map(|(i, _)| i).collect()
    }

    /// `z` lies outside every disc and outside the excluded central disc.
    pub fn admits(&self, z: ComplexPoint) -> bool {
        z.norm() > self.excluded_radius() && !self.per_annulus.iter().any(|a| a.discs.iter().any(|d| d.contains(z)))
    }

    /// Index `ν` of the annulus holding `|z|`.
    pub fn annulus_of(&self, r: f64) -> i64 {
        match self.b {
            None => (r.ln() / self.alpha.ln()).floor() as i64,
            Some(b) => ((1.0 - r).ln() / b.ln()).floor() as i64,
        }
    }

    /// `d_ν` from the construction's formula.
    pub fn d_nu(&self, nu: u32) -> f64 {
        d_nu(&self.gauge, self.alpha, self.b, nu)
    }

    /// All side conditions hold on `ν₀..=ν_end`.
    pub fn all_side_conditions(&self) -> bool {
        self.side_conditions.iter().filter(|c| c.nu >= self.nu0).all(SideConditions::all)
    }

    /// The retained discs as a collection with the exact weight as its budget.
    pub fn to_collection(&self) -> Result<DiscCollection> {
        let discs = self.discs();
        if discs.is_empty() {
            return Ok(DiscCollection::empty(self.gauge));
        }
        DiscCollection::sealed(self.ambient, self.gauge, discs, 0)
    }
}

/// Smallest `l >= 1` with `2^l >= α`.
pub fn l_exponent(alpha: f64) -> u32 {
    (alpha.log2() - 1e-12).ceil().max(1.0) as u32
}

/// `d_ν = K(α^ν)/(log α^ν)^α` in the plane, `k(b^ν)/(ν^α (-log b)^α)` in the unit disc.
pub fn d_nu(gauge: &Gauge, alpha: f64, b: Option<f64>, nu: u32) -> f64 {
    let nu_f = nu as f64;
    match b {
        None => gauge.value(alpha.powi(nu as i32)) / (nu_f * alpha.ln()).powf(alpha),
        Some(b) => gauge.value(b.powi(nu as i32)) / (nu_f.powf(alpha) * (-b.ln()).powf(alpha)),
    }
}

/// Threshold on `log μ_ν` used by the chains: `max(1, 1/(α - 1))` in the plane, `1` in the unit disc.
pub fn counting_threshold(alpha: f64, unit: bool) -> f64 {
    if unit {
        1.0
    } else {
        (1.0 / (alpha - 1.0)).max(1.0)
    }
}

/// Builds the exceptional discs for `f^{(j)}`.
///
/// Plane: annuli `α^ν <= |z| < α^{ν+1}`, Cartan discs on the points with modulus
/// `<= α^{ν+2}` and `d = d_ν`. Unit disc (`b` given): annuli
/// `1 - b^ν <= |z| < 1 - b^{ν+1}` and points with modulus `<= 1 - b^{ν+2}`.
pub fn build_exceptional_set(
    f: &ZeroPoleData,
    j: usize,
    alpha: f64,
    gauge: &Gauge,
    ambient: Ambient,
    b: Option<f64>,
) -> Result<CartanConstruction> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha {alpha} must exceed 1")));
    }
    if gauge.ambient() != ambient {
        return Err(Error::invalid(format!("gauge {gauge} does not live in the {ambient:?} ambient")));
    }
    let b = match ambient {
        Ambient::Plane => {
            if !matches!(gauge.class(), GaugeClass::PlaneConcave | GaugeClass::PlaneConstant) {
                return Err(Error::UnsupportedGauge(gauge.to_string()));
            }
            if gauge.alpha.is_some_and(|a| a > alpha) {
                return Err(Error::PreconditionFail(format!(
                    "gauge doubling constant {} exceeds alpha {alpha}",
                    gauge.alpha.unwrap()
                )));
            }
            None
        }
        Ambient::UnitDisc => {
            let b = b.ok_or_else(|| Error::invalid("unit-disc construction needs b"))?;
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::invalid(format!("b = {b} not in (0, 1)")));
            }
            if gauge.class() != GaugeClass::UnitConvex {
                return Err(Error::UnsupportedGauge(gauge.to_string()));
            }
            f.check_inside_unit_disc()?;
            Some(b)
        }
    };
    let data = f.derivative_data(j)?;
    if b.is_some() {
        data.check_inside_unit_disc()?;
    }
    let expanded = data.expanded();
    let max_mod = data.max_modulus();
    let unit = b.is_some();
    let thr = counting_threshold(alpha, unit);
    let radius = |nu: i32| match b {
        None => alpha.powi(nu),
        Some(b) => 1.0 - b.powi(nu),
    };

    // Last annulus a disc can reach: centers lie within d_ν of a point and radii are
    // at most 2d_ν.
    let mut nu_end = 1;
    while nu_end < NU_LIMIT {
        let d = d_nu(gauge, alpha, b, nu_end);
        if radius(nu_end as i32) > max_mod + 3.0 * d && side(gauge, alpha, b, nu_end, 0, thr).small_discs {
            break;
        }
        nu_end += 1;
    }
    if nu_end == NU_LIMIT {
        return Err(Error::Numeric("annulus scan did not terminate".into()));
    }

    let mu_of = |nu: u32| data.count_within(radius(nu as i32 + 2));
    let conds: Vec<SideConditions> = (1..=nu_end).map(|nu| side(gauge, alpha, b, nu, mu_of(nu), thr)).collect();
    // With fewer than e^thr points in total the counting condition never holds; ν₀
    // then rests on the geometric conditions alone and the inner chain is void.
    let counting_ok = conds.last().is_some_and(|c| c.counting);
    let nu0 = (1..=nu_end)
        .rev()
        .take_while(|&nu| {
            let c = &conds[nu as usize - 1];
            c.small_discs && c.regime && (c.counting || !counting_ok)
        })
        .last()
        .ok_or_else(|| Error::PreconditionFail("side conditions fail at the last annulus".into()))?;

    let mut per_annulus = Vec::new();
    for nu in nu0..=nu_end {
        let inner = radius(nu as i32);
        let outer = radius(nu as i32 + 1);
        let reach = radius(nu as i32 + 2);
        let pts: Vec<ComplexPoint> = expanded.iter().copied().filter(|p| p.norm() <= reach).collect();
        let d = d_nu(gauge, alpha, b, nu);
        let discs: Vec<Disc> = cartan_discs(&pts, d)
            .into_iter()
            .filter(|c| c.modulus() + c.radius >= inner && c.modulus() - c.radius < outer)
            .collect();
        let radii_sum = discs.iter().map(|c| c.radius).sum();
        let weight = discs.iter().map(|c| c.radius / gauge.value(c.size(ambient).max(f64::MIN_POSITIVE))).sum();
        let (weight_bound, closed_form) = match b {
            None => {
                let nu_f = nu as f64;
                (
                    2.0 * alpha * d / gauge.value(inner),
                    Some(2.0 * alpha / (nu_f.powf(alpha) * alpha.ln().powf(alpha))),
                )
            }
            Some(b) => (2.0 * d / gauge.value(b.powi(nu as i32 + 1) - 2.0 * d), None),
        };
        per_annulus.push(AnnulusRecord {
            nu,
            inner,
            outer,
            mu_nu: pts.len() as u64,
            d_nu: d,
            discs,
            radii_sum,
            weight,
            weight_bound,
            closed_form,
        });
    }

    let placement_ok = per_annulus.iter().flat_map(|a| a.discs.iter()).all(|c| match b {
        None => !c.contains(ComplexPoint::new(0.0, 0.0)),
        Some(_) => c.modulus() + c.radius < 1.0,
    });
    let weight_sum = per_annulus.iter().map(|a| a.weight).sum();
    let weight_bound_sum = per_annulus.iter().map(|a| a.weight_bound).sum();
    let closed_form_sum = b.is_none().then(|| per_annulus.iter().filter_map(|a| a.closed_form).sum());
    let weight_ok = per_annulus.iter().all(|a| a.weight <= a.weight_bound * (1.0 + 1e-12));
    Ok(CartanConstruction {
        ambient,
        alpha,
        b,
        gauge: *gauge,
        j,
        nu0,
        nu_end,
        l_exponent: l_exponent(alpha),
        per_annulus,
        side_conditions: conds,
        weight_sum,
        weight_bound_sum,
        closed_form_sum,
        weight_ok,
        counting_ok,
        placement_ok,
        derivative_data: data,
    })
}

fn side(gauge: &Gauge, alpha: f64, b: Option<f64>, nu: u32, mu: u64, thr: f64) -> SideConditions {
    let d = d_nu(gauge, alpha, b, nu);
    let counting = mu == 0 || (mu as f64).ln() >= thr;
    match b {
        None => {
            let a = alpha.powi(nu as i32);
            let r = if matches!(gauge.kind, GaugeKind::PlaneConstant) { 0.0 } else { gauge.r_threshold };
            SideConditions { nu, small_discs: a > 4.0 * d, regime: a >= 2.0 * r, counting }
        }
        Some(b) => {
            let bn = b.powi(nu as i32);
            SideConditions { nu, small_discs: 4.0 * d < bn * b, regime: bn * b < 1.0 - bn, counting }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn d_nu_identity_example() {
        let d = d_nu(&Gauge::identity(), 2.0, None, 3);
        let oracle = 8.0 / (3.0 * std::f64::consts::LN_2).powi(2);
        assert_relative_eq!(d, oracle, max_relative = 1e-14);
        assert!((d - 1.8501).abs() < 1e-4);
    }

    #[test]
    fn mu_nu_counts_to_alpha_squared() {
        let f = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(0.0, 3.0), c(-10.0, 0.0), c(40.0, 0.0)]).unwrap();
        assert_eq!(f.count_within(2f64.powi(4)), 3);
    }

    #[test]
    fn empty_function_has_no_discs() {
        let con =
            build_exceptional_set(&ZeroPoleData::default(), 0, 2.0, &Gauge::identity(), Ambient::Plane, None).unwrap();
        assert_eq!(con.disc_count(), 0);
        assert!(con.weight_ok);
    }

    #[test]
    fn l_exponent_values() {
        assert_eq!(l_exponent(2.0), 1);
        assert_eq!(l_exponent(1.5), 1);
        assert_eq!(l_exponent(3.0), 2);
        assert_eq!(l_exponent(4.0), 2);
    }

    #[test]
    fn plane_construction_invariants() {
        let zeros: Vec<ComplexPoint> = (0..30).map(|i| ComplexPoint::from_polar(1.0 + i as f64, i as f64)).collect();
        let f = ZeroPoleData::from_zeros(&zeros).unwrap();
        let con = build_exceptional_set(&f, 0, 2.0, &Gauge::identity(), Ambient::Plane, None).unwrap();
        assert!(con.placement_ok && con.weight_ok);
        for a in &con.per_annulus {
            assert!(a.radii_sum <= 2.0 * a.d_nu);
            assert_relative_eq!(a.weight_bound, a.closed_form.unwrap(), max_relative = 1e-12);
            assert!(con.alpha.powi(a.nu as i32) > 4.0 * a.d_nu);
            assert!(a.mu_nu == 0 || (a.mu_nu as f64).ln() >= 1.0);
        }
    }

    #[test]
    fn unit_construction_invariants() {
        let zeros: Vec<ComplexPoint> = (1..=12).map(|m| c(1.0 - 0.5f64.powi(m), 0.0)).collect();
        let f = ZeroPoleData::from_zeros(&zeros).unwrap();
        let g = Gauge::unit_stolz_power(1.0).unwrap();
        let con = build_exceptional_set(&f, 0, 2.0, &g, Ambient::UnitDisc, Some(0.5)).unwrap();
        assert!(con.all_side_conditions());
        assert!(con.placement_ok && con.weight_ok);
        // ν^2 > 4/(b (log 2)^2) first holds at ν = 5.
        assert!(con.nu0 >= 5);
    }

    #[test]
    fn rejects_bad_gauges() {
        let f = ZeroPoleData::from_zeros(&[c(2.0, 0.0)]).unwrap();
        let r = build_exceptional_set(&f, 0, 2.0, &Gauge::convex_power(1.0).unwrap(), Ambient::Plane, None);
        assert!(matches!(r, Err(Error::UnsupportedGauge(_))));
        let r = build_exceptional_set(&f, 0, 1.2, &Gauge::identity(), Ambient::Plane, None);
        assert!(matches!(r, Err(Error::PreconditionFail(_))));
    }
}
