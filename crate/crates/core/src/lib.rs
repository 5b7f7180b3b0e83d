//! Multi-objective particle swarm optimization with exponentially-averaged
//! momentum.
//!
//! The crate provides three optimizers that share one archive-driven main
//! loop and differ only in their velocity update:
//!
//! * **SMPSO**: constricted vanilla PSO with `c1, c2 ~ U(1.5, 2.5)`.
//! * **EM-SMPSO**: momentum-aided update with `beta ~ U(0, 1)` and the
//!   momentum-aware constriction factor.
//! * **FCPSO**: EM-SMPSO with the coefficient range `c1, c2 ~ U(1, 1.7336)`
//!   chosen so that the constriction factor is active exactly half the time.
//!
//! Alongside the optimizers sit the analytic tools that explain the
//! difference: constriction factors and their spectral justification
//! ([`constriction`]), the activation-probability / unfairness calculus
//! ([`fairness`]), benchmark problems ([`problems`]), quality indicators
//! ([`indicators`]) and a seeded experiment harness ([`experiments`]).
//!
//! The analytic layers are generic over the floating-point type through
//! [`Scalar`]; the stochastic optimizer runs in `f64`.

// Negated comparisons deliberately send NaN down the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod archive;
pub mod constriction;
pub mod error;
pub mod experiments;
pub mod fairness;
pub mod indicators;
pub mod mutation;
pub mod optimizer;
pub mod problems;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod swarm;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision parameter scheme, the type used by the optimizers.
pub type Scheme = fairness::ParameterScheme<f64>;
/// Single-precision parameter scheme.
pub type Scheme32 = fairness::ParameterScheme<f32>;
/// Double-precision eigenvalue pair of the momentum map.
pub type EigenPair64 = constriction::EigenPair<f64>;
/// Double-precision map state.
pub type MapState64 = constriction::MapState<f64>;
/// Archive of `f64` decision/objective vectors, as used by the optimizer.
pub type Archive = archive::ExternalArchive<f64>;
/// Entry of an [`Archive`].
pub type Entry = archive::ArchiveEntry<f64>;
/// Indicator report in double precision.
pub type Report = indicators::IndicatorReport<f64>;
