//! High-precision checks of invariant differential operator identities on
//! H2 and H1 x C, evaluated on exponential test functions.

pub mod bigc;
pub mod jet;
pub mod ops;
pub mod verify;

pub use bigc::{BigC, PREC};
pub use ops::{eval_l, eval_maass_m, eval_phi1, eval_phi2, ExpTestFn, LOp, SamplePoint};
pub use verify::{check_residual_kernel, run_suite, t_decompose, DiffopReport, IdentityResult, TDecomposition};

#[derive(Debug, thiserror::Error)]
pub enum DiffopError {
    #[error("ill-conditioned sample set: {0}")]
    IllConditioned(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
}
