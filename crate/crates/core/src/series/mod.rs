//! Truncated models of overconvergent series and Robba-ring fragments.

pub mod laurent;
pub mod poly;
pub mod truncated;

pub use laurent::LaurentFragment;
pub use poly::KPoly;
pub use truncated::{dwork_tail, exp_poly, exp_poly_with_tail, Tail, TruncatedSeries, MAX_TRUNCATION};
