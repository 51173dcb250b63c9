//! Ishikawa iteration for nonexpansive mappings in uniformly convex geodesic
//! spaces, with explicit, uniform rates of asymptotic regularity.
//!
//! The crate is generic over its scalar type: geometry and iteration run over
//! any [`scalar::Real`] (`f32`, `f64`), while the rate formulas evaluate over
//! any [`scalar::Scalar`], including exact [`num_rational::BigRational`]
//! arithmetic so that certified bounds never round down. The aliases at the
//! crate root fix the scalar to `f64`.

// `!(x > 0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod geometry;
pub mod iteration;
pub mod mappings;
pub mod moduli;
pub mod rates;
pub mod rational;
pub mod scalar;
pub mod verification;

pub use error::{Error, Result};
pub use rational::Rational;

/// Double-precision point.
pub type Point = geometry::Point<f64>;

/// Double-precision trajectory.
pub type Trajectory = iteration::Trajectory<f64>;

/// Double-precision map.
pub type MappingSpec = mappings::MappingSpec<f64>;

/// Double-precision rate inputs.
pub type RateInputs = rates::RateInputs<f64>;
