//! Numerical library for a lossless twin-beam system in which phase-sensitive
//! amplification of the backward idler and four-wave-mixing conversion give
//! the two conjugate quadrature pairs opposite (active/passive) PT symmetry.
//!
//! The crate provides:
//!
//! - closed-form boundary-value propagators for all four quadrature pairs and
//!   both pump phases ([`propagator`]),
//! - quadrature/noise observables of the vacuum-seeded output: variances,
//!   correlation coefficients, relative-intensity noise figure, photon-number
//!   statistics ([`observables`]),
//! - EPR criteria, the output covariance matrix and logarithmic negativity
//!   ([`epr`]),
//! - coherent-seed sensing quantities: susceptibilities, inverse variances and
//!   the quantum Fisher information for estimating the conversion rate
//!   ([`sensing`]),
//! - an independent oracle layer (matrix exponentials, covariance propagation,
//!   Wick moments, finite differences) that validates every closed form
//!   ([`oracle`], [`verify`]),
//! - a deterministic parameter-sweep engine ([`sweep`]).
//!
//! Conventions: quadratures q = (a† + a)/2, p = i(a† - a)/2 with [q, p] = i/2
//! and vacuum variance 1/4; lengths in units of 1/kappa with the dimensionless
//! plot variable 2*kappa*l; all closed forms evaluated through one complex
//! continuation rule across the exceptional point b = g/(2 kappa) = 1.

pub mod epr;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod propagator;
pub mod sensing;
pub mod sweep;
pub mod verify;

pub use error::{QptError, Result};
pub use params::{PtParams, PtPhase};
pub use propagator::{PumpPhase, QuadPair, TransferMatrix2};
