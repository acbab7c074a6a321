//! JSON front end for the `weil2` library: module specifications, the
//! `lfunction` and `fourier` reports, and the verification suites.

pub mod commands;
pub mod encode;
pub mod error;
pub mod spec;
pub mod suites;

pub use error::CliError;
