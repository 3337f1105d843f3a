//! Cartan exceptional discs and pointwise bounds for logarithmic derivatives and
//! logarithmic differences of rational test functions.

pub mod bounds;
pub mod cartan;
pub mod construction;
pub mod rational;

pub use bounds::{
    check_logderiv_bound, check_logderiv_bound_unitdisc, check_logdiff_bound, BoundReport, SampleRecord,
};
pub use cartan::{cartan_discs, check_cartan, CartanCheck};
pub use construction::{build_exceptional_set, d_nu, l_exponent, AnnulusRecord, CartanConstruction, SideConditions};
pub use rational::{
    characteristic_proxy, characteristic_proxy_unit, counting_function, log_derivative, log_derivative_direct,
    log_derivative_recursive, PointKind, Poly, ZeroPole, ZeroPoleData,
};
