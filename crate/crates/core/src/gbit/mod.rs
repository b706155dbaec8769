//! A single generalized bit.
//!
//! States live in the unit ball of `R^d` (Bloch representation
//! `x_i = 2 p_i - 1`), pure states on its boundary sphere. Measurements are
//! identified with the pure state they certify, so the outcome probability of
//! state `x` measured along pure `m` is `(1 + x.m) / 2`.

mod map;
mod metric;
mod toy;

use nalgebra::DVector;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::scalar::{abs, sqrt, Real, Scalar, PURE_TOL};

pub use map::{apply_map, OrthogonalMap};
pub use metric::{whiten, FiducialMetric};
pub use toy::{axiom1_decomposable, ConvexStateSpace, Decomposition, EffectPair};

/// State of one generalized bit in Bloch form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "BlochRepr<T>",
    into = "BlochRepr<T>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + DeserializeOwned")
)]
pub struct BlochState<T: Scalar> {
    x: DVector<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlochRepr<T> {
    d: usize,
    x: Vec<T>,
}

impl<T: Scalar> TryFrom<BlochRepr<T>> for BlochState<T> {
    type Error = Error;

    fn try_from(repr: BlochRepr<T>) -> Result<Self> {
        if repr.d != repr.x.len() {
            return Err(Error::DimensionMismatch {
                expected: repr.d,
                found: repr.x.len(),
            });
        }
        BlochState::from_vec(repr.x)
    }
}

impl<T: Scalar> From<BlochState<T>> for BlochRepr<T> {
    fn from(state: BlochState<T>) -> Self {
        BlochRepr {
            d: state.d(),
            x: state.x.iter().copied().collect(),
        }
    }
}

impl<T: Scalar> BlochState<T> {
    /// Wraps a Bloch vector, rejecting anything outside the unit ball.
    pub fn new(x: DVector<T>) -> Result<Self> {
        let n2 = norm_sq(&x);
        let tol = T::validity_tol();
        if n2 > T::one() + tol + tol {
            return Err(Error::OutsideBlochBall {
                norm: n2.as_f64().sqrt(),
            });
        }
        Ok(Self { x })
    }

    pub fn from_vec(x: Vec<T>) -> Result<Self> {
        Self::new(DVector::from_vec(x))
    }

    pub(crate) fn from_raw(x: DVector<T>) -> Self {
        Self { x }
    }

    /// Pure state certain to give the `+1` outcome of fiducial measurement `i`.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d, "basis index {i} out of range for d = {d}");
        let mut x = DVector::from_element(d, T::zero());
        x[i] = T::one();
        Self { x }
    }

    /// The zero vector.
    pub fn totally_mixed(d: usize) -> Self {
        Self {
            x: DVector::from_element(d, T::zero()),
        }
    }

    pub fn d(&self) -> usize {
        self.x.len()
    }

    pub fn vector(&self) -> &DVector<T> {
        &self.x
    }

    pub fn into_vector(self) -> DVector<T> {
        self.x
    }

    /// The perfectly distinguishable partner `-x`.
    pub fn orthogonal(&self) -> Self {
        Self { x: -&self.x }
    }

    pub fn norm_sq(&self) -> T {
        norm_sq(&self.x)
    }

    pub fn is_pure(&self) -> bool {
        let edge = T::one() - T::tol(PURE_TOL);
        self.norm_sq() >= edge * edge
    }

    /// Fiducial probabilities `p_i = (1 + x_i) / 2`.
    pub fn probabilities(&self) -> Vec<T> {
        self.x.iter().map(|&xi| (T::one() + xi) * T::half()).collect()
    }
}

impl<T: Real> BlochState<T> {
    pub fn norm(&self) -> T {
        sqrt(self.norm_sq())
    }
}

/// Bloch vector from fiducial probabilities.
pub fn bloch_from_probs<T: Scalar>(p: &[T]) -> Result<BlochState<T>> {
    for (index, &value) in p.iter().enumerate() {
        if value < T::zero() || value > T::one() {
            return Err(Error::ProbabilityOutOfRange {
                index,
                value: value.as_f64(),
            });
        }
    }
    let x = DVector::from_iterator(p.len(), p.iter().map(|&pi| T::two() * pi - T::one()));
    BlochState::new(x)
}

/// Probability of the outcome certified by the pure state `along` when the
/// system is prepared in `state`.
pub fn measure_prob<T: Scalar>(state: &BlochState<T>, along: &BlochState<T>) -> Result<T> {
    if state.d() != along.d() {
        return Err(Error::DimensionMismatch {
            expected: state.d(),
            found: along.d(),
        });
    }
    let n2 = along.norm_sq();
    if abs(n2 - T::one()) > T::validity_tol() {
        return Err(Error::NotPureDirection {
            norm_sq: n2.as_f64(),
        });
    }
    Ok(T::half() * (T::one() + dot(&state.x, &along.x)))
}

/// Convex mixture `sum_i w_i x_i`.
pub fn mix<T: Scalar>(states: &[BlochState<T>], weights: &[T]) -> Result<BlochState<T>> {
    let first = states.first().ok_or(Error::EmptyMixture)?;
    if states.len() != weights.len() {
        return Err(Error::WeightCount {
            states: states.len(),
            weights: weights.len(),
        });
    }
    let d = first.d();
    let mut sum = T::zero();
    let mut x = DVector::from_element(d, T::zero());
    for (index, (s, &w)) in states.iter().zip(weights).enumerate() {
        if s.d() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: s.d(),
            });
        }
        if w < T::zero() {
            return Err(Error::NegativeWeight {
                index,
                value: w.as_f64(),
            });
        }
        sum += w;
        x += &s.x * w;
    }
    if abs(sum - T::one()) > T::validity_tol() {
        return Err(Error::WeightsNotNormalized { sum: sum.as_f64() });
    }
    Ok(BlochState { x })
}
