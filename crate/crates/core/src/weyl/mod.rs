//! The Weyl algebra with `[∂, x] = π^{-1}`, its Fourier automorphism, the
//! action on sections of a module, and the fibrewise Fourier transform.

pub mod action;
pub mod fourier;
pub mod operator;

pub use action::{act, frobenius_commutation_series};
pub use fourier::{
    fourier_fiber, fourier_fiber_over, surjectivity_probe, FiberParam, FiberSource, FourierFiberReport,
    SurjectivityProbe,
};
pub use operator::{
    monomial_word, normal_form, product_coefficient, rho, rho_closed_form, weyl_mul, weyl_mul_by_words, Gen,
    WeylOperator,
};
