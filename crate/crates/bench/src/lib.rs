//! Fixtures shared by the benchmarks.

use esetlab::disc_sets::gen_random;
use esetlab::experiments::LogDerivConfig;
use esetlab::logderiv::ZeroPoleData;
use esetlab::{Ambient, ComplexPoint, DiscCollection, Gauge};

pub const SEED: u64 = 20240601;

/// Seeded 500-disc collection for the gauge `√x`.
pub fn plane_collection(count: usize) -> DiscCollection {
    let g = Gauge::concave_power(0.5).expect("valid exponent");
    gen_random(Ambient::Plane, g, count, 1e-3, 1.0, SEED).expect("valid parameters")
}

/// Seeded rational function with `zeros` zeros in `|z| < 50`.
pub fn rational(zeros: usize) -> ZeroPoleData {
    LogDerivConfig { zeros, ..Default::default() }.function().expect("seeded zeros are finite")
}

/// `n` points on a spiral, clustered toward the origin.
pub fn spiral(n: usize) -> Vec<ComplexPoint> {
    (0..n).map(|i| ComplexPoint::from_polar(0.1 * i as f64, 0.7 * i as f64)).collect()
}
