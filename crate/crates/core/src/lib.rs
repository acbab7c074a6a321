//! Desk-scale p-adic cohomology of exponential sums on the affine line.
//!
//! The crate computes, with exact arithmetic wherever possible:
//!
//! * the ramified field `K = Q(π)`, `π^(p-1) = -p`, the ring `Z[ζ_p]` and
//!   finite fields, with the π-adic and complex bridges between them
//!   ([`numeric`]);
//! * truncated overconvergent series with tail certificates ([`series`]);
//! * (σ,∇)-modules built from Dwork twists, their compatibility check,
//!   horizontal bases and fibre Frobenius ([`sigma_nabla`]);
//! * de Rham `H¹` by degree reduction, Frobenius on it, duality, Swan
//!   bookkeeping, the trace formula, Newton slopes and weights
//!   ([`cohomology`]);
//! * the overconvergent Weyl algebra, its Fourier automorphism and the
//!   fibrewise Fourier transform ([`weyl`]);
//! * exact character sums and L-polynomials used as ground truth
//!   ([`oracle`]).

pub mod cohomology;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod series;
pub mod sigma_nabla;
pub mod weyl;

pub use error::{Error, Result};
