//! Two generalized bits.
//!
//! A composite state is the triple `(x, y, T)`: two local Bloch vectors and
//! the `d x d` correlation tensor. Measurements are again identified with the
//! pure state they certify, giving the probability rule
//! `P(a, b) = (1 + x_a.x_b + y_a.y_b + Tr(T_a^T T_b)) / 4`.

mod schmidt;
mod subspace;

use nalgebra::{DMatrix, DVector};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbit::{BlochState, OrthogonalMap};
use crate::linalg::{dot, frobenius_dot, frobenius_sq, max_abs_diff, norm_sq, outer};
use crate::scalar::{abs, sqrt, Real, Scalar};

pub use schmidt::{schmidt_decompose, SchmidtForm};
pub use subspace::{
    in_s12, in_s34, lemma2_product_states_in_s12, lemma3_flip_maps_to_s34, s12_residuals,
    s34_residuals, Lemma2Report, SubspaceBasis,
};

/// State of two generalized bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "TwoGbitRepr<T>",
    into = "TwoGbitRepr<T>",
    bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + DeserializeOwned")
)]
pub struct TwoGbitState<T: Scalar> {
    x: DVector<T>,
    y: DVector<T>,
    t: DMatrix<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoGbitRepr<T> {
    d: usize,
    x: Vec<T>,
    y: Vec<T>,
    #[serde(rename = "T")]
    t: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<TwoGbitRepr<T>> for TwoGbitState<T> {
    type Error = Error;

    fn try_from(repr: TwoGbitRepr<T>) -> Result<Self> {
        let d = repr.d;
        for len in [repr.x.len(), repr.y.len(), repr.t.len()] {
            if len != d {
                return Err(Error::DimensionMismatch { expected: d, found: len });
            }
        }
        let t = crate::serde_util::matrix_from_rows(repr.t).map_err(Error::Malformed)?;
        if t.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: t.ncols(),
            });
        }
        TwoGbitState::new(DVector::from_vec(repr.x), DVector::from_vec(repr.y), t)
    }
}

impl<T: Scalar> From<TwoGbitState<T>> for TwoGbitRepr<T> {
    fn from(s: TwoGbitState<T>) -> Self {
        TwoGbitRepr {
            d: s.d(),
            x: s.x.iter().copied().collect(),
            y: s.y.iter().copied().collect(),
            t: crate::serde_util::matrix_rows(&s.t),
        }
    }
}

impl<T: Scalar> TwoGbitState<T> {
    /// Validated state: matching shapes, `|x|, |y| <= 1`, `|T_ij| <= 1`.
    pub fn new(x: DVector<T>, y: DVector<T>, t: DMatrix<T>) -> Result<Self> {
        let s = Self::candidate(x, y, t)?;
        let tol = T::validity_tol();
        for v in [&s.x, &s.y] {
            let n2 = norm_sq(v);
            if n2 > T::one() + tol + tol {
                return Err(Error::OutsideBlochBall {
                    norm: n2.as_f64().sqrt(),
                });
            }
        }
        if let Some(bad) = s.t.iter().find(|v| abs(**v) > T::one() + tol) {
            return Err(Error::Malformed(format!(
                "correlation entry {} outside [-1, 1]",
                bad.as_f64()
            )));
        }
        Ok(s)
    }

    /// Shape-checked triple that may fail the physical bounds. Used for
    /// candidate states whose physicality is being tested.
    pub fn candidate(x: DVector<T>, y: DVector<T>, t: DMatrix<T>) -> Result<Self> {
        let d = x.len();
        if y.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: y.len(),
            });
        }
        if t.nrows() != d || t.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if t.nrows() != d { t.nrows() } else { t.ncols() },
            });
        }
        Ok(Self { x, y, t })
    }

    pub(crate) fn from_raw(x: DVector<T>, y: DVector<T>, t: DMatrix<T>) -> Self {
        Self { x, y, t }
    }

    /// `(0, 0, T)` with diagonal correlations.
    pub fn correlated_diagonal(diag: &[T]) -> Self {
        let d = diag.len();
        Self {
            x: DVector::zeros(d),
            y: DVector::zeros(d),
            t: DMatrix::from_diagonal(&DVector::from_column_slice(diag)),
        }
    }

    /// The maximally entangled solution of ordinary quantum theory,
    /// `(0, 0, diag[1, -1, 1])`.
    pub fn psi_qm() -> Self {
        Self::correlated_diagonal(&[T::one(), -T::one(), T::one()])
    }

    /// The mirror solution `(0, 0, diag[1, 1, 1])`.
    pub fn psi_mqm() -> Self {
        Self::correlated_diagonal(&[T::one(), T::one(), T::one()])
    }

    /// The singlet, `(0, 0, diag[-1, -1, -1])`.
    pub fn singlet() -> Self {
        Self::correlated_diagonal(&[-T::one(), -T::one(), -T::one()])
    }

    /// The totally mixed state `(0, 0, 0)`.
    pub fn totally_mixed(d: usize) -> Self {
        Self {
            x: DVector::zeros(d),
            y: DVector::zeros(d),
            t: DMatrix::zeros(d, d),
        }
    }

    pub fn d(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &DVector<T> {
        &self.x
    }

    pub fn y(&self) -> &DVector<T> {
        &self.y
    }

    pub fn t(&self) -> &DMatrix<T> {
        &self.t
    }

    /// `|x|^2 + |y|^2 + |T|^2`, equal to 3 for pure states.
    pub fn normalization(&self) -> T {
        norm_sq(&self.x) + norm_sq(&self.y) + frobenius_sq(&self.t)
    }

    pub fn is_pure(&self, tol: T) -> bool {
        abs(self.normalization() - T::from_int(3)) <= tol
    }

    /// `T == x y^T` within `tol` (entrywise).
    pub fn is_product(&self, tol: T) -> bool {
        max_abs_diff(&self.t, &outer(&self.x, &self.y)) <= tol
    }

    /// Squared Frobenius norm of the correlation tensor.
    pub fn correlation_norm_sq(&self) -> T {
        frobenius_sq(&self.t)
    }

    /// Largest entrywise difference to another state of the same `d`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let dx = max_abs_diff(
            &DMatrix::from_column_slice(self.d(), 1, self.x.as_slice()),
            &DMatrix::from_column_slice(other.d(), 1, other.x.as_slice()),
        );
        let dy = max_abs_diff(
            &DMatrix::from_column_slice(self.d(), 1, self.y.as_slice()),
            &DMatrix::from_column_slice(other.d(), 1, other.y.as_slice()),
        );
        let dt = max_abs_diff(&self.t, &other.t);
        crate::scalar::max(dx, crate::scalar::max(dy, dt))
    }

    /// Convex combination `w a + (1 - w) b`.
    pub fn blend(&self, other: &Self, w: T) -> Self {
        let v = T::one() - w;
        Self {
            x: &self.x * w + &other.x * v,
            y: &self.y * w + &other.y * v,
            t: &self.t * w + &other.t * v,
        }
    }
}

impl<T: Real> TwoGbitState<T> {
    pub fn correlation_norm(&self) -> T {
        sqrt(self.correlation_norm_sq())
    }
}

/// Composite probability rule. Deliberately unclamped: a negative value
/// signals that the pair cannot coexist in one theory.
pub fn composite_prob<T: Scalar>(prepared: &TwoGbitState<T>, measured: &TwoGbitState<T>) -> Result<T> {
    if prepared.d() != measured.d() {
        return Err(Error::DimensionMismatch {
            expected: prepared.d(),
            found: measured.d(),
        });
    }
    Ok(T::quarter()
        * (T::one()
            + dot(&prepared.x, &measured.x)
            + dot(&prepared.y, &measured.y)
            + frobenius_dot(&prepared.t, &measured.t)))
}

/// Product state `(x, y, x y^T)`.
pub fn product_state<T: Scalar>(x: &BlochState<T>, y: &BlochState<T>) -> Result<TwoGbitState<T>> {
    if x.d() != y.d() {
        return Err(Error::DimensionMismatch {
            expected: x.d(),
            found: y.d(),
        });
    }
    Ok(TwoGbitState {
        x: x.vector().clone(),
        y: y.vector().clone(),
        t: outer(x.vector(), y.vector()),
    })
}

/// `(R1, R2)(x, y, T) = (R1 x, R2 y, R1 T R2^T)`.
pub fn local_transform<T: Scalar>(
    r1: &OrthogonalMap<T>,
    r2: &OrthogonalMap<T>,
    psi: &TwoGbitState<T>,
) -> Result<TwoGbitState<T>> {
    for r in [r1, r2] {
        if r.d() != psi.d() {
            return Err(Error::DimensionMismatch {
                expected: psi.d(),
                found: r.d(),
            });
        }
    }
    Ok(TwoGbitState {
        x: r1.apply_vector(&psi.x),
        y: r2.apply_vector(&psi.y),
        t: r1.matrix() * &psi.t * r2.matrix().transpose(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separability {
    Product,
    Entangled,
}

/// `|T|` for a pure state. It equals 1 exactly on product states and
/// exceeds 1 on entangled ones.
pub fn entanglement_witness<T: Real>(psi: &TwoGbitState<T>) -> Result<T> {
    if !psi.is_pure(T::validity_tol()) {
        return Err(Error::NotPureState {
            normalization: psi.normalization().as_f64(),
        });
    }
    Ok(psi.correlation_norm())
}

/// Pure-state classification from the witness.
pub fn classify<T: Real>(psi: &TwoGbitState<T>, tol: T) -> Result<Separability> {
    let w = entanglement_witness(psi)?;
    Ok(if abs(w - T::one()) < tol {
        Separability::Product
    } else {
        Separability::Entangled
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbit::measure_prob;
    use num_rational::Rational64;

    fn q(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn pure_states_have_unit_self_overlap() {
        for psi in [
            TwoGbitState::<f64>::psi_qm(),
            TwoGbitState::psi_mqm(),
            TwoGbitState::singlet(),
        ] {
            assert_eq!(composite_prob(&psi, &psi).unwrap(), 1.0);
            assert_eq!(psi.normalization(), 3.0);
        }
    }

    #[test]
    fn mirror_state_has_negative_overlap_with_singlet() {
        let p = composite_prob(&TwoGbitState::<Rational64>::psi_mqm(), &TwoGbitState::singlet()).unwrap();
        assert_eq!(p, q(-1, 2));
    }

    #[test]
    fn product_probabilities_factorize() {
        let x1 = BlochState::from_vec(vec![0.6f64, 0.0, 0.8]).unwrap();
        let y1 = BlochState::from_vec(vec![0.0, 1.0, 0.0]).unwrap();
        let x2 = BlochState::from_vec(vec![0.0, 0.6, 0.8]).unwrap();
        let y2 = BlochState::from_vec(vec![0.8, 0.6, 0.0]).unwrap();
        let a = product_state(&x1, &y1).unwrap();
        let b = product_state(&x2, &y2).unwrap();
        let expected = measure_prob(&x1, &x2).unwrap() * measure_prob(&y1, &y2).unwrap();
        assert!((composite_prob(&a, &b).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn product_state_examples() {
        let e1 = BlochState::<Rational64>::basis(3, 0);
        let e2 = BlochState::<Rational64>::basis(3, 1);
        let basis = SubspaceBasis::standard(3);
        assert_eq!(&product_state(&e1, &e1).unwrap(), basis.psi(1));

        let mixed = BlochState::totally_mixed(3);
        let zero = product_state(&mixed, &mixed).unwrap();
        assert_eq!(zero, TwoGbitState::totally_mixed(3));
        for other in [TwoGbitState::psi_qm(), TwoGbitState::singlet(), basis.psi(3).clone()] {
            assert_eq!(composite_prob(&zero, &other).unwrap(), q(1, 4));
        }

        let p = product_state(&e1, &e2.orthogonal()).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(0, 1)] = q(-1, 1);
        assert_eq!(p.t(), &expected);
    }

    #[test]
    fn witness_values() {
        let e1 = BlochState::<f64>::basis(3, 0);
        let p = product_state(&e1, &e1).unwrap();
        assert_eq!(entanglement_witness(&p).unwrap(), 1.0);
        assert_eq!(classify(&p, 1e-9).unwrap(), Separability::Product);
        let w = entanglement_witness(&TwoGbitState::<f64>::psi_qm()).unwrap();
        assert!((w - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            classify(&TwoGbitState::<f64>::psi_qm(), 1e-9).unwrap(),
            Separability::Entangled
        );
        let mixed = TwoGbitState::<f64>::totally_mixed(3);
        assert!(matches!(
            entanglement_witness(&mixed),
            Err(Error::NotPureState { .. })
        ));
    }

    #[test]
    fn local_transform_examples() {
        let psi = TwoGbitState::new(
            DVector::from_vec(vec![0.1, 0.2, 0.3]),
            DVector::from_vec(vec![-0.3, 0.0, 0.2]),
            DMatrix::from_row_slice(3, 3, &[0.5, 0.1, 0.0, 0.0, -0.4, 0.2, 0.3, 0.0, 0.1]),
        )
        .unwrap();
        let id = OrthogonalMap::identity(3);
        assert_eq!(local_transform(&id, &id, &psi).unwrap(), psi);
        let e = OrthogonalMap::total_inversion(3);
        let img = local_transform(&e, &id, &psi).unwrap();
        assert_eq!(img.x(), &(-psi.x()));
        assert_eq!(img.y(), psi.y());
        assert_eq!(img.t(), &(-psi.t()));
        assert!(local_transform(&OrthogonalMap::identity(2), &id, &psi).is_err());
    }

    #[test]
    fn validation() {
        let bad = TwoGbitState::new(
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[1.5, 0.0, 0.0, 0.0]),
        );
        assert!(bad.is_err());
        let ok = TwoGbitState::candidate(
            DVector::from_vec(vec![0.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[1.5, 0.0, 0.0, 0.0]),
        );
        assert!(ok.is_ok());
        let shape = TwoGbitState::<f64>::candidate(
            DVector::zeros(2),
            DVector::zeros(3),
            DMatrix::zeros(2, 2),
        );
        assert!(matches!(shape, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn json_layout() {
        let psi = TwoGbitState::<f64>::psi_qm();
        let json = serde_json::to_string(&psi).unwrap();
        assert_eq!(
            json,
            r#"{"d":3,"x":[0.0,0.0,0.0],"y":[0.0,0.0,0.0],"T":[[1.0,0.0,0.0],[0.0,-1.0,0.0],[0.0,0.0,1.0]]}"#
        );
        let back: TwoGbitState<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, psi);
        let ragged = r#"{"d":2,"x":[0,0],"y":[0,0],"T":[[1],[0,1]]}"#;
        assert!(serde_json::from_str::<TwoGbitState<f64>>(ragged).is_err());
    }
}
