//! Pointwise checks of the logarithmic-derivative and logarithmic-difference
//! estimates outside a Cartan construction.

use rayon::prelude::*;
use serde::Serialize;

use super::construction::CartanConstruction;
use super::rational::{characteristic_proxy, characteristic_proxy_unit, log_derivative, ZeroPoleData};
use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge};
use crate::numeric::log_plus;
use crate::ComplexPoint;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// `Σ 1/|z - a_m|` over the points the inner chain sums.
    pub inner_lhs: f64,
    /// Right end of the inner chain.
    pub inner_rhs: f64,
    pub inner_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub estimate: String,
    pub k: usize,
    pub j: usize,
    /// How `T(r, f)` was replaced for the rational test function.
    pub t_proxy: String,
    /// Whether the inner chain is asserted (false when `log μ_ν` never reaches the threshold).
    pub inner_applicable: bool,
    pub samples: Vec<SampleRecord>,
    /// `max LHS/RHS` over all samples.
    pub empirical_c: f64,
    /// `max LHS/RHS` over the first half of the samples.
    pub empirical_c_half: f64,
    /// `|C - C_half| / C`.
    pub stability: f64,
    pub stable: bool,
    /// Samples violating the inner chain.
    pub violations: Vec<usize>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.stable
    }
}

const STABILITY_TOL: f64 = 0.1;

fn aggregate(estimate: &str, k: usize, j: usize, t_proxy: &str, inner_applicable: bool, samples: Vec<SampleRecord>) -> BoundReport {
    let max_ratio = |s: &[SampleRecord]| s.iter().map(|x| x.ratio).fold(0.0, f64::max);
    let empirical_c = max_ratio(&samples);
    let empirical_c_half = max_ratio(&samples[..samples.len() / 2]);
    let stability = if empirical_c > 0.0 { (empirical_c - empirical_c_half).abs() / empirical_c } else { 0.0 };
    let violations =
        if inner_applicable { samples.iter().filter(|s| !s.inner_ok).map(|s| s.index).collect() } else { vec![] };
    BoundReport {
        estimate: estimate.into(),
        k,
        j,
        t_proxy: t_proxy.into(),
        inner_applicable,
        samples,
        empirical_c,
        empirical_c_half,
        stability,
        stable: stability < STABILITY_TOL,
        violations,
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

fn check_construction(con: &CartanConstruction, alpha: f64, gauge: &Gauge, j: usize, ambient: Ambient) -> Result<()> {
    if con.alpha != alpha || con.gauge != *gauge || con.j != j || con.ambient != ambient {
        return Err(Error::invalid("construction was built for different parameters"));
    }
    if !(con.b.is_some() == (ambient == Ambient::UnitDisc)) {
        return Err(Error::invalid("construction ambient mismatch"));
    }
    Ok(())
}

fn reject_inside(con: &CartanConstruction, z_samples: &[ComplexPoint], shift: Option<ComplexPoint>) -> Result<()> {
    let bad: Vec<usize> = z_samples
        .par_iter()
        .enumerate()
        .filter(|(_, &z)| !con.admits(z) || shift.is_some_and(|c| !con.admits(z + c)))
        .map(|(i, _)| i)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::InsideExceptionalSet(bad))
    }
}

/// `Σ_{|a| <= t} 1/|z - a|` over points repeated by multiplicity.
fn near_sum(points: &[ComplexPoint], z: ComplexPoint, t: f64) -> f64 {
    points.iter().take_while(|a| a.norm() <= t).map(|a| 1.0 / (z - a).norm()).sum()
}

/// Plane inner chain at `z`: `Σ_{|a|<=αr} 1/|z-a| <= α^{l+1} n(α²r) log n(α²r) log^α r / K(r)`.
fn plane_inner(con: &CartanConstruction, pts: &[ComplexPoint], data: &ZeroPoleData, z: ComplexPoint) -> (f64, f64) {
    let (alpha, r) = (con.alpha, z.norm());
    let lhs = near_sum(pts, z, alpha * r);
    let n = data.count_within(alpha * alpha * r) as f64;
    let nlogn = if n > 0.0 { n * n.ln() } else { 0.0 };
    let rhs = alpha.powi(con.l_exponent as i32 + 1) * nlogn * r.ln().powf(alpha) / con.gauge.value(r);
    (lhs, rhs)
}

/// Plane bracket `T(αr)/r + n(αr) log⁺ n(αr) log^α r / K(r)`.
fn plane_bracket(f: &ZeroPoleData, data: &ZeroPoleData, alpha: f64, gauge: &Gauge, r: f64) -> f64 {
    let n = data.count_within(alpha * r) as f64;
    characteristic_proxy(f, alpha * r) / r + n * log_plus(n) * r.ln().powf(alpha) / gauge.value(r)
}

fn inner_ok(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + 1e-12)
}

/// Checks `|f^{(k)}/f^{(j)}(z)|^{1/(k-j)}` against the plane bracket and the inner
/// Cartan chain at every sample.
pub fn check_logderiv_bound(
    f: &ZeroPoleData,
    k: usize,
    j: usize,
    alpha: f64,
    gauge: &Gauge,
    z_samples: &[ComplexPoint],
    construction: &CartanConstruction,
) -> Result<BoundReport> {
    check_construction(construction, alpha, gauge, j, Ambient::Plane)?;
    if k <= j {
        return Err(Error::invalid(format!("need k > j, got k = {k}, j = {j}")));
    }
    reject_inside(construction, z_samples, None)?;
    let data = &construction.derivative_data;
    let pts = data.expanded();
    let samples = z_samples
        .par_iter()
        .enumerate()
        .map(|(index, &z)| {
            let r = z.norm();
            let lhs = log_derivative(f, k, j, z)?.norm().powf(1.0 / (k - j) as f64);
            let rhs = plane_bracket(f, data, alpha, gauge, r);
            let (il, ir) = plane_inner(construction, &pts, data, z);
            Ok(SampleRecord {
                index,
                re: z.re,
                im: z.im,
                r,
                lhs,
                rhs,
                ratio: ratio(lhs, rhs),
                inner_lhs: il,
                inner_rhs: ir,
                inner_ok: inner_ok(il, ir),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("logderiv", k, j, "max(zeros, poles)·log⁺ r", construction.counting_ok, samples))
}

/// Checks `|log|f(z+c)/f(z)||` against the plane bracket; the inner chain is checked
/// at both `z` and `z + c` and the worse of the two is recorded.
pub fn check_logdiff_bound(
    f: &ZeroPoleData,
    c_shift: ComplexPoint,
    alpha: f64,
    gauge: &Gauge,
    z_samples: &[ComplexPoint],
    construction: &CartanConstruction,
) -> Result<BoundReport> {
    check_construction(construction, alpha, gauge, 0, Ambient::Plane)?;
    reject_inside(construction, z_samples, Some(c_shift))?;
    let data = &construction.derivative_data;
    let pts = data.expanded();
    let samples = z_samples
        .par_iter()
        .enumerate()
        .map(|(index, &z)| {
            let r = z.norm();
            let lhs = (f.log_modulus(z + c_shift)? - f.log_modulus(z)?).abs();
            let rhs = plane_bracket(f, data, alpha, gauge, r);
            let a = plane_inner(construction, &pts, data, z);
            let b = plane_inner(construction, &pts, data, z + c_shift);
            let worse = |p: (f64, f64)| if p.0 == 0.0 { 0.0 } else { p.0 / p.1 };
            let (il, ir) = if worse(b) > worse(a) { b } else { a };
            Ok(SampleRecord {
                index,
                re: z.re,
                im: z.im,
                r,
                lhs,
                rhs,
                ratio: ratio(lhs, rhs),
                inner_lhs: il,
                inner_rhs: ir,
                inner_ok: inner_ok(a.0, a.1) && inner_ok(b.0, b.1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("logdiff", 1, 0, "max(zeros, poles)·log⁺ r", construction.counting_ok, samples))
}

/// Unit-disc version: bracket `(T(s(r)) - log(1-r))/(1-r)² + W(r)` with
/// `s(r) = 1 - b(1-r)`, inner chain
/// `Σ_{|a|<=s(r)} 1/|z-a| <= 2 n(1-b²(1-r)) log n(1-b²(1-r)) log^α(1/(1-r)) / k(1-r)`.
#[allow(clippy::too_many_arguments)]
pub fn check_logderiv_bound_unitdisc(
    f: &ZeroPoleData,
    k: usize,
    j: usize,
    alpha: f64,
    b: f64,
    gauge: &Gauge,
    z_samples: &[ComplexPoint],
    construction: &CartanConstruction,
) -> Result<BoundReport> {
    check_construction(construction, alpha, gauge, j, Ambient::UnitDisc)?;
    if construction.b != Some(b) {
        return Err(Error::invalid("construction was built for a different b"));
    }
    if k <= j {
        return Err(Error::invalid(format!("need k > j, got k = {k}, j = {j}")));
    }
    if let Some(i) = z_samples.iter().position(|z| z.norm() >= 1.0) {
        return Err(Error::invalid(format!("sample {i} lies outside the unit disc")));
    }
    reject_inside(construction, z_samples, None)?;
    let data = &construction.derivative_data;
    let pts = data.expanded();
    let samples = z_samples
        .par_iter()
        .enumerate()
        .map(|(index, &z)| {
            let r = z.norm();
            let u = 1.0 - r;
            let s = 1.0 - b * u;
            let lhs = log_derivative(f, k, j, z)?.norm().powf(1.0 / (k - j) as f64);
            let log_inv = -u.ln();
            let n_s = data.count_within(s) as f64;
            let w = n_s * log_plus(n_s) * log_inv.powf(alpha) / gauge.value(u);
            let rhs = (characteristic_proxy_unit(f, s) + log_inv) / (u * u) + w;
            let il = near_sum(&pts, z, s);
            let n2 = data.count_within(1.0 - b * b * u) as f64;
            let nlogn = if n2 > 0.0 { n2 * n2.ln() } else { 0.0 };
            let ir = 2.0 * nlogn * log_inv.powf(alpha) / gauge.value(u);
            Ok(SampleRecord {
                index,
                re: z.re,
                im: z.im,
                r,
                lhs,
                rhs,
                ratio: ratio(lhs, rhs),
                inner_lhs: il,
                inner_rhs: ir,
                inner_ok: inner_ok(il, ir),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate("logderiv_disc", k, j, "max(N(r,0), N(r,∞), 0)", construction.counting_ok, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logderiv::build_exceptional_set;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    #[test]
    fn inner_chain_example() {
        let f = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 2.0)]).unwrap();
        let con = build_exceptional_set(&f, 0, 2.0, &Gauge::identity(), Ambient::Plane, None).unwrap();
        let pts = f.expanded();
        let (l, r) = plane_inner(&con, &pts, &f, c(5.0, 0.0));
        let lhs = 0.25 + 1.0 / 6.0 + 1.0 / 29f64.sqrt();
        let rhs = 4.0 * 3.0 * 3f64.ln() * 5f64.ln().powi(2) / 5.0;
        assert_relative_eq!(l, lhs, max_relative = 1e-14);
        assert_relative_eq!(r, rhs, max_relative = 1e-14);
        assert!((l - 0.60237).abs() < 1e-5 && (r - 6.830).abs() < 1e-3);
    }

    #[test]
    fn z_squared_needs_c_two_at_most() {
        let f = ZeroPoleData::new(vec![crate::logderiv::ZeroPole::zero(c(0.0, 0.0), 2)]).unwrap();
        let g = Gauge::identity();
        let con = build_exceptional_set(&f, 0, 2.0, &g, Ambient::Plane, None).unwrap();
        let zs: Vec<ComplexPoint> = (0..200).map(|i| ComplexPoint::from_polar(3.0 + i as f64, 0.1 * i as f64)).collect();
        let zs: Vec<ComplexPoint> = zs.into_iter().filter(|z| con.admits(*z)).collect();
        let rep = check_logderiv_bound(&f, 1, 0, 2.0, &g, &zs, &con).unwrap();
        for s in &rep.samples {
            assert_relative_eq!(s.lhs, 2.0 / s.r, max_relative = 1e-14);
            assert_relative_eq!(s.rhs, 2.0 * (2.0 * s.r).ln() / s.r + 2.0 * 2f64.ln() * s.r.ln().powi(2) / s.r, max_relative = 1e-12);
        }
        assert!(rep.empirical_c <= 2.0);
    }

    #[test]
    fn logdiff_examples() {
        let g = Gauge::identity();
        let empty = ZeroPoleData::default();
        let con = build_exceptional_set(&empty, 0, 2.0, &g, Ambient::Plane, None).unwrap();
        let zs = [c(100.0, 0.0), c(0.0, 50.0)];
        let rep = check_logdiff_bound(&empty, c(1.0, 0.0), 2.0, &g, &zs, &con).unwrap();
        assert!(rep.samples.iter().all(|s| s.lhs == 0.0 && s.inner_lhs == 0.0));

        let f = ZeroPoleData::from_zeros(&[c(0.0, 0.0)]).unwrap();
        let con = build_exceptional_set(&f, 0, 2.0, &g, Ambient::Plane, None).unwrap();
        let rep = check_logdiff_bound(&f, c(1.0, 0.0), 2.0, &g, &[c(100.0, 0.0)], &con).unwrap();
        let s = &rep.samples[0];
        assert_relative_eq!(s.lhs, (1.01f64).ln(), max_relative = 1e-12);
        assert!((s.lhs - 0.00995).abs() < 1e-5);
        assert_relative_eq!(s.rhs, 200f64.ln() / 100.0, max_relative = 1e-12);
        let rep0 = check_logdiff_bound(&f, c(0.0, 0.0), 2.0, &g, &[c(100.0, 0.0), c(7.0, 7.0)], &con).unwrap();
        assert!(rep0.samples.iter().all(|s| s.lhs == 0.0));
    }

    #[test]
    fn inside_sample_rejected_with_index() {
        let f = ZeroPoleData::from_zeros(&[c(40.0, 0.0), c(41.0, 0.0), c(40.0, 1.0), c(-3.0, 30.0)]).unwrap();
        let g = Gauge::identity();
        let con = build_exceptional_set(&f, 0, 2.0, &g, Ambient::Plane, None).unwrap();
        let inside = con.discs()[0].center;
        match check_logderiv_bound(&f, 1, 0, 2.0, &g, &[c(1000.0, 0.0), inside], &con) {
            Err(Error::InsideExceptionalSet(ix)) => assert_eq!(ix, vec![1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unit_single_zero_at_origin() {
        let f = ZeroPoleData::from_zeros(&[c(0.0, 0.0)]).unwrap();
        let g = Gauge::unit_stolz_power(1.0).unwrap();
        let con = build_exceptional_set(&f, 0, 2.0, &g, Ambient::UnitDisc, Some(0.5)).unwrap();
        let zs: Vec<ComplexPoint> =
            (0..100).map(|i| ComplexPoint::from_polar(1.0 - 0.3 * 0.9f64.powi(i), i as f64)).filter(|z| con.admits(*z)).collect();
        assert!(!zs.is_empty());
        let rep = check_logderiv_bound_unitdisc(&f, 1, 0, 2.0, 0.5, &g, &zs, &con).unwrap();
        for s in &rep.samples {
            assert_relative_eq!(s.lhs, 1.0 / s.r, max_relative = 1e-14);
            assert!(s.rhs >= -(1.0 - s.r).ln() / (1.0 - s.r).powi(2));
        }
        assert!(rep.empirical_c.is_finite());
    }

    #[test]
    fn unit_empty_inner_sum() {
        let g = Gauge::unit_stolz_power(1.0).unwrap();
        let empty = ZeroPoleData::default();
        let con = build_exceptional_set(&empty, 0, 2.0, &g, Ambient::UnitDisc, Some(0.5)).unwrap();
        let rep = check_logderiv_bound_unitdisc(&empty, 1, 0, 2.0, 0.5, &g, &[c(0.99, 0.0)], &con).unwrap();
        assert_eq!(rep.samples[0].inner_lhs, 0.0);
        assert!(rep.violations.is_empty());
    }
}
