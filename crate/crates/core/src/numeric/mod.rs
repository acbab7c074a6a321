//! Exact arithmetic: the field `K = Q(π)`, its finite-precision projection,
//! `Z[ζ_p]`, finite fields and small dense matrices.

pub mod approx;
pub mod cyclo;
pub mod finite_field;
pub mod matrix;
pub mod pifield;
pub mod ring;
pub mod valuation;

pub use approx::{hensel_zeta_p, teichmuller_lift, PiAdicApprox, ZetaPowers};
pub use cyclo::{embed_cyclo, CycloElem};
pub use finite_field::{ff_trace, FFElem, FiniteField};
pub use matrix::Mat;
pub use pifield::{is_prime, PiField, PiFieldElem};
pub use ring::RingElem;
pub use valuation::{q64, Valuation, Q64};
