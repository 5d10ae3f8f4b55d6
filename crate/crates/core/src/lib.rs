//! Exact coefficient pipelines for Jacobi and Siegel Eisenstein series,
//! Hecke operators on Jacobi forms and lattice representation numbers.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod hecke;
pub mod jacobi;
pub mod klingen;
pub mod lattice;
pub mod qexp;

pub use arith::Rat;
pub use error::{Error, Result};
