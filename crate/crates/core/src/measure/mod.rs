//! Interval-union algebra, projection sets and their gauge integrals, exceptional
//! c-sets with Monte Carlo cross-checks, and density functionals.

pub(crate) mod density;
mod exceptional;
mod integral;
mod interval;

pub use density::{k_density, k_density_unit, DensityReport};
pub use exceptional::{exceptional_c_measure, monte_carlo_hits, ExceptionalReport, HitReport, MeasureBoundKind};
pub use integral::{
    gauge_integral, projection, projection_integral, tail_projection, vertical_projection, IntegralReport,
    ProjectionIntegralReport, QUAD_MAX_EVALS, QUAD_TOL,
};
pub use interval::IntervalUnion;
