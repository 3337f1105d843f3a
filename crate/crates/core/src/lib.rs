//! Exceptional sets of disc collections along gauge curves.
//!
//! Disc collections weighted by a gauge (`Σ r_n / K(|z_n|) < ∞` in the plane,
//! `Σ r_n / k(1 - |z_n|) < ∞` in the unit disc), the curve families they are
//! tested against, the measure of the exceptional curve parameters, Cartan-disc
//! constructions for logarithmic derivative bounds and the exceptional-set
//! avoidance lemmas.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod avoidance;
pub mod curve_geometry;
pub mod disc_sets;
pub mod error;
pub mod experiments;
pub mod gauges;
pub mod logderiv;
pub mod measure;
pub mod numeric;

pub use disc_sets::{Disc, DiscCollection};
pub use error::{Error, Result};
pub use gauges::{Ambient, Gauge, GaugeClass, GaugeKind};

/// Point of the complex plane.
pub type ComplexPoint = num_complex::Complex64;
