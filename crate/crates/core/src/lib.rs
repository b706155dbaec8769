//! Generalized bits, their two-party composites, and the machinery for
//! checking which correlated states survive the composite-system axioms.
//!
//! State types are generic over the scalar: `f64`/`f32` for numerics, and
//! [`num_rational::Rational64`] where results are exact (probability rules,
//! partial transposition, Bell tables).

pub mod axiom;
pub mod composite;
pub mod error;
pub mod gbit;
pub mod linalg;
pub mod mirror;
pub mod quantum;
pub mod random;
pub mod scalar;
mod serde_util;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

use num_rational::Rational64;

pub type Bloch = gbit::BlochState<f64>;
pub type Bloch32 = gbit::BlochState<f32>;
pub type BlochQ = gbit::BlochState<Rational64>;
pub type TwoGbit = composite::TwoGbitState<f64>;
pub type TwoGbit32 = composite::TwoGbitState<f32>;
pub type TwoGbitQ = composite::TwoGbitState<Rational64>;
pub type Rotation = gbit::OrthogonalMap<f64>;
pub type RotationQ = gbit::OrthogonalMap<Rational64>;
pub type Density = quantum::DensityMatrix<f64>;
pub type DensityQ = quantum::DensityMatrix<Rational64>;
pub type Unitary = quantum::UnitaryMap<f64>;
