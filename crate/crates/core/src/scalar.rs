//! Scalar abstractions.
//!
//! Everything that only needs ring arithmetic (probability rules, local maps,
//! partial transposition, marginals) is written against [`Scalar`], so it runs
//! on `f32`, `f64` and exact rationals alike. Anything that needs square roots
//! or spectral decompositions asks for [`Real`] instead.

use std::fmt::Debug;

use nalgebra as na;
use num_rational::Rational64;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Tolerance used for validity checks (orthogonality, norms, probability range).
pub const VALIDITY_TOL: f64 = 1e-9;

/// Tolerance for equality assertions on `f64` results.
pub const EQUALITY_TOL: f64 = 1e-12;

/// Threshold below `1` at which a Bloch vector counts as pure.
pub const PURE_TOL: f64 = 1e-9;

/// Membership tolerance for the correlated/anticorrelated one-bit subspaces.
pub const SUBSPACE_TOL: f64 = 1e-7;

/// Ring-like scalar: exact or floating point.
pub trait Scalar:
    na::Scalar
    + Copy
    + NumAssign
    + Signed
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + Debug
{
    /// Validity tolerance appropriate for the type's precision.
    fn validity_tol() -> Self;

    /// Tolerance for identities that hold up to rounding only.
    fn equality_tol() -> Self;

    /// Converts a tolerance given in `f64` to this type.
    fn tol(v: f64) -> Self {
        Self::from_f64(v).expect("tolerance representable")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn quarter() -> Self {
        Self::half() * Self::half()
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn validity_tol() -> Self {
        VALIDITY_TOL
    }

    fn equality_tol() -> Self {
        EQUALITY_TOL
    }
}

impl Scalar for f32 {
    fn validity_tol() -> Self {
        1e-5
    }

    fn equality_tol() -> Self {
        1e-5
    }
}

impl Scalar for Rational64 {
    fn validity_tol() -> Self {
        Rational64::new(1, 1_000_000_000)
    }

    fn equality_tol() -> Self {
        Rational64::new(1, 1_000_000_000_000)
    }
}

/// Floating point scalar with square roots and spectral decompositions.
pub trait Real: Scalar + na::RealField {}

impl Real for f64 {}
impl Real for f32 {}

pub(crate) fn abs<T: Scalar>(v: T) -> T {
    Signed::abs(&v)
}

pub(crate) fn sqrt<T: Real>(v: T) -> T {
    na::ComplexField::sqrt(v)
}

pub(crate) fn max<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_helpers_are_exact() {
        assert_eq!(Rational64::half(), Rational64::new(1, 2));
        assert_eq!(Rational64::quarter(), Rational64::new(1, 4));
        assert_eq!(abs(Rational64::new(-3, 7)), Rational64::new(3, 7));
    }

    #[test]
    fn float_tolerances() {
        assert_eq!(f64::validity_tol(), 1e-9);
        assert!(f32::validity_tol() > f32::EPSILON);
        assert_eq!(sqrt(4.0f64), 2.0);
    }
}
