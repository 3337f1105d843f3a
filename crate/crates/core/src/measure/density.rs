use serde::{Deserialize, Serialize};

use super::{gauge_integral, IntervalUnion};
use crate::error::{Error, Result};
use crate::gauges::{Ambient, Gauge};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub r_grid: Vec<f64>,
    /// `∫_{E ∩ [r, ·)} dx / gauge`.
    pub tail_values: Vec<f64>,
    pub ratio_values: Vec<f64>,
    /// Maximum ratio over the last decade of the grid, standing in for the limsup.
    pub limsup_estimate: f64,
}

/// Tail integrals `∫_{E ∩ [r, ∞)}` for every grid point, from per-interval integrals
/// and suffix sums. Quadrature jitter is removed by a running minimum so the values
/// are non-increasing in `r`.
pub(crate) fn tail_integrals(e: &IntervalUnion, gauge: &Gauge, r_grid: &[f64]) -> Result<Vec<f64>> {
    let whole = gauge_integral(e, gauge)?.per_interval;
    let mut suffix = vec![0.0; whole.len() + 1];
    for i in (0..whole.len()).rev() {
        suffix[i] = suffix[i + 1] + whole[i];
    }
    let iv = e.intervals();
    let mut out = Vec::with_capacity(r_grid.len());
    let mut running = f64::INFINITY;
    for &r in r_grid {
        let i = iv.partition_point(|&(_, hi)| hi <= r);
        let mut v = suffix[(i + 1).min(whole.len())];
        if i < iv.len() {
            let (lo, hi) = iv[i];
            v += if lo >= r {
                whole[i]
            } else {
                gauge_integral(&IntervalUnion::from_intervals([(r, hi)])?, gauge)?.value
            };
        }
        running = running.min(v);
        out.push(running);
    }
    Ok(out)
}

fn check_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.is_empty() || r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("density grid must be non-empty and strictly increasing"));
    }
    Ok(())
}

/// K-density trajectory `(K(r)/r) ∫_{E∩[r,∞)} dx/K(x) / ε(r)`.
pub fn k_density(e: &IntervalUnion, gauge: &Gauge, eps: &dyn Fn(f64) -> f64, r_grid: &[f64]) -> Result<DensityReport> {
    check_grid(r_grid)?;
    if gauge.ambient() != Ambient::Plane {
        return Err(Error::UnsupportedGauge(gauge.to_string()));
    }
    let tails = tail_integrals(e, gauge, r_grid)?;
    let mut ratios = Vec::with_capacity(r_grid.len());
    for (&r, &t) in r_grid.iter().zip(&tails) {
        let den = eps(r);
        if !(den > 0.0) {
            return Err(Error::invalid(format!("ε({r}) = {den} must be positive")));
        }
        ratios.push(gauge.value(r) / r * t / den);
    }
    let last = *r_grid.last().unwrap();
    let limsup = decade_max(r_grid, &ratios, |r| r >= last / 10.0);
    Ok(DensityReport { r_grid: r_grid.to_vec(), tail_values: tails, ratio_values: ratios, limsup_estimate: limsup })
}

/// k-density trajectory `(k(1-r)/(1-r)) ∫_{E∩[r,1)} dx/k(1-x) / (1 - b(r))`.
pub fn k_density_unit(
    e: &IntervalUnion,
    gauge: &Gauge,
    b: &dyn Fn(f64) -> f64,
    r_grid: &[f64],
) -> Result<DensityReport> {
    check_grid(r_grid)?;
    if gauge.ambient() != Ambient::UnitDisc {
        return Err(Error::UnsupportedGauge(gauge.to_string()));
    }
    if r_grid[0] < 0.0 || *r_grid.last().unwrap() >= 1.0 {
        return Err(Error::invalid("unit density grid must lie in [0, 1)"));
    }
    let tails = tail_integrals(e, gauge, r_grid)?;
    let mut ratios = Vec::with_capacity(r_grid.len());
    for (&r, &t) in r_grid.iter().zip(&tails) {
        let den = 1.0 - b(r);
        if !(den > 0.0) {
            return Err(Error::invalid(format!("1 - b({r}) = {den} must be positive")));
        }
        let u = 1.0 - r;
        ratios.push(gauge.value(u) / u * t / den);
    }
    let last_gap = 1.0 - *r_grid.last().unwrap();
    let limsup = decade_max(r_grid, &ratios, |r| 1.0 - r <= 10.0 * last_gap);
    Ok(DensityReport { r_grid: r_grid.to_vec(), tail_values: tails, ratio_values: ratios, limsup_estimate: limsup })
}

fn decade_max(grid: &[f64], values: &[f64], in_decade: impl Fn(f64) -> bool) -> f64 {
    grid.iter().zip(values).filter(|(r, _)| in_decade(**r)).map(|(_, v)| *v).fold(0.0, f64::max)
}
