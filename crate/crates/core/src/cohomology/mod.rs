//! de Rham cohomology of twisted modules on the affine line: reduction,
//! Frobenius, characteristic polynomials, duality and the trace formula.

pub mod charpoly;
pub mod frobenius;
pub mod reduce;
pub mod swan;
pub mod trace;

pub use charpoly::{
    dual_poly, duality_holds_exactly, identify, newton_slopes, polynomial_roots, weight_check, CharPoly,
    CoeffValuation, Coeffs, WeightVerdict,
};
pub use frobenius::{default_truncation, frobenius_on_h1, FrobeniusOnH1};
pub use reduce::{apply_connection, dominant_regime, DominantRegime, H1Presentation};
pub use swan::{swan_predict, SwanData, SwanPrediction};
pub use trace::{h1c_via_duality, lefschetz_verify, LefschetzReport, TraceRecord};
