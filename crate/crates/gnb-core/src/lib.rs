//! Extended negative binomial distribution NB(lambda, 2beta; m) attached to
//! generalized weighted Bergman spaces on the unit disk.
//!
//! The crate has four layers:
//!
//! * [`specfun`] — stable scalar building blocks: log-gamma ratios, Jacobi
//!   polynomials (both evaluation routes, including negative-integer upper
//!   parameter), terminating Gauss hypergeometric sums, Laguerre polynomials.
//! * [`bergman`] — the eigenbasis Phi_k of one hyperbolic Landau level, its
//!   norm squares, the reproducing-kernel diagonal, and coherent states over
//!   the Laguerre carrier basis.
//! * [`distribution`] — the photon-counting law of those coherent states:
//!   PMF/CDF/quantile/sampling, generating function (closed form and
//!   series), moments with series ground truth, Mandel Q and the
//!   sub/super-Poissonian classification.
//! * [`oracle`] — brute-force validators (series summation, quadrature,
//!   polynomial identities) that certify every closed form against an
//!   independent route and report where the classical displays fail.
//!
//! Everything is generic over the scalar type through [`Real`]
//! (`f32`/`f64`); the `*64` aliases below fix the working precision the
//! accuracy contracts are stated for.

// validation guards use `!(x > 0)` so that NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman;
pub mod distribution;
mod error;
pub mod oracle;
pub mod quad;
mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` working-precision aliases.
pub type SpaceParams64 = bergman::SpaceParams<f64>;
pub type DiskPoint64 = bergman::DiskPoint<f64>;
pub type DistParams64 = distribution::DistParams<f64>;
pub type PmfTable64 = distribution::PmfTable<f64>;
pub type Moments64 = distribution::Moments<f64>;
pub type StatClassification64 = distribution::StatClassification<f64>;
pub type ValidationReport64 = oracle::ValidationReport<f64>;
