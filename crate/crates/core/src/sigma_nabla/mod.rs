//! (σ,∇)-modules on the affine line: Dwork twists, tensor operations, the
//! compatibility check, horizontal bases and Frobenius fibres.

pub mod compat;
pub mod fiber;
pub mod horizontal;
pub mod module;

pub use compat::{check_compatibility, CompatibilityReport, ResidualEntry};
pub use fiber::fiber_frobenius;
pub use horizontal::{horizontal_basis, horizontal_residual, series_matrix_product};
pub use module::{
    direct_sum, dual, dual_generic, invert_field_matrix, invert_series_matrix, make_dwork_module, tensor,
    tensor_generic, trivial_module, DworkTwist, SigmaNablaModule,
};
