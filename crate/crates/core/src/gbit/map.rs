use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::BlochState;
use crate::error::{Error, Result};
use crate::linalg::{determinant, identity_deviation};
use crate::scalar::{Real, Scalar};

/// Reversible transformation of a generalized bit: a real orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap<T: Scalar> {
    r: DMatrix<T>,
}

impl<T: Scalar> OrthogonalMap<T> {
    /// Accepts `r` if `R^T R = I` within the type's validity tolerance.
    pub fn new(r: DMatrix<T>) -> Result<Self> {
        if !r.is_square() {
            return Err(Error::NotSquare {
                rows: r.nrows(),
                cols: r.ncols(),
            });
        }
        let deviation = identity_deviation(&(r.transpose() * &r));
        if deviation > T::validity_tol() {
            return Err(Error::NotOrthogonal {
                deviation: deviation.as_f64(),
            });
        }
        Ok(Self { r })
    }

    pub(crate) fn from_raw(r: DMatrix<T>) -> Self {
        Self { r }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            r: DMatrix::identity(d, d),
        }
    }

    /// Total inversion `x -> -x`.
    pub fn total_inversion(d: usize) -> Self {
        Self {
            r: -DMatrix::<T>::identity(d, d),
        }
    }

    /// Diagonal map flipping the sign of each listed coordinate.
    pub fn coordinate_flip(d: usize, flipped: &[usize]) -> Self {
        let mut diag = DVector::from_element(d, T::one());
        for &i in flipped {
            diag[i] = -T::one();
        }
        Self {
            r: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn d(&self) -> usize {
        self.r.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.r
    }

    pub fn determinant(&self) -> T {
        determinant(&self.r)
    }

    /// Whether the map lies in the identity component `SO(d)`.
    pub fn is_special(&self) -> bool {
        self.determinant() > T::zero()
    }

    pub fn inverse(&self) -> Self {
        Self {
            r: self.r.transpose(),
        }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            r: &self.r * &other.r,
        }
    }

    pub fn apply_vector(&self, v: &DVector<T>) -> DVector<T> {
        &self.r * v
    }
}

impl<T: Real> OrthogonalMap<T> {
    /// Rotation by `angle` in the plane spanned by axes `i` and `j`
    /// (taking `e_i` towards `e_j`).
    pub fn plane_rotation(d: usize, i: usize, j: usize, angle: T) -> Self {
        assert!(i != j && i < d && j < d, "invalid rotation plane ({i}, {j}) for d = {d}");
        let (s, c) = angle.sin_cos();
        let mut r = DMatrix::identity(d, d);
        r[(i, i)] = c;
        r[(j, j)] = c;
        r[(j, i)] = s;
        r[(i, j)] = -s;
        Self { r }
    }
}

impl<T: Scalar + Serialize> Serialize for OrthogonalMap<T> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        crate::serde_util::matrix_rows(&self.r).serialize(serializer)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for OrthogonalMap<T> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(deserializer)?;
        let m = crate::serde_util::matrix_from_rows(rows).map_err(serde::de::Error::custom)?;
        OrthogonalMap::new(m).map_err(serde::de::Error::custom)
    }
}

/// Applies a reversible transformation to a state. Norm is preserved.
pub fn apply_map<T: Scalar>(map: &OrthogonalMap<T>, state: &BlochState<T>) -> Result<BlochState<T>> {
    if map.d() != state.d() {
        return Err(Error::DimensionMismatch {
            expected: map.d(),
            found: state.d(),
        });
    }
    Ok(BlochState::from_raw(map.apply_vector(state.vector())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_and_half_turn() {
        let x = BlochState::from_vec(vec![0.3, -0.2, 0.1]).unwrap();
        assert_eq!(apply_map(&OrthogonalMap::identity(3), &x).unwrap(), x);

        let r = OrthogonalMap::plane_rotation(3, 0, 1, PI);
        let y = apply_map(&r, &BlochState::basis(3, 0)).unwrap();
        assert!((y.vector() - DVector::from_vec(vec![-1.0, 0.0, 0.0])).amax() < 1e-15);
        assert!(r.is_special());
    }

    #[test]
    fn total_inversion_is_improper_in_odd_d() {
        let x = BlochState::from_vec(vec![0.3, -0.2, 0.1]).unwrap();
        let e = OrthogonalMap::<f64>::total_inversion(3);
        assert_eq!(apply_map(&e, &x).unwrap(), x.orthogonal());
        assert_eq!(e.determinant(), -1.0);
        assert!(!e.is_special());
        assert!(OrthogonalMap::<f64>::total_inversion(4).is_special());
    }

    #[test]
    fn rejects_non_orthogonal() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(OrthogonalMap::new(m), Err(Error::NotOrthogonal { .. })));
        let m = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
        assert!(matches!(OrthogonalMap::new(m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let r = OrthogonalMap::<f64>::identity(2);
        assert!(apply_map(&r, &BlochState::basis(3, 0)).is_err());
    }
}
