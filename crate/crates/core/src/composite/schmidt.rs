use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use super::TwoGbitState;
use crate::gbit::OrthogonalMap;
use crate::linalg::determinant;
use crate::scalar::{abs, Real};

/// Local bases in which the correlation tensor is diagonal:
/// `R1 T R2^T = diag(t)` with `det R1 = det R2 = +1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm<T: Real> {
    pub r1: OrthogonalMap<T>,
    pub r2: OrthogonalMap<T>,
    pub t: DVector<T>,
}

impl<T: Real> SchmidtForm<T> {
    /// `R1^T diag(t) R2`, which should give back the original tensor.
    pub fn reconstruct(&self) -> DMatrix<T> {
        self.r1.matrix().transpose() * DMatrix::from_diagonal(&self.t) * self.r2.matrix()
    }
}

impl<T: Real + Serialize> Serialize for SchmidtForm<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a, T> {
            #[serde(rename = "R1")]
            r1: Vec<Vec<T>>,
            #[serde(rename = "R2")]
            r2: Vec<Vec<T>>,
            t: &'a [T],
        }
        Repr {
            r1: crate::serde_util::matrix_rows(self.r1.matrix()),
            r2: crate::serde_util::matrix_rows(self.r2.matrix()),
            t: self.t.as_slice(),
        }
        .serialize(serializer)
    }
}

struct Triple<T> {
    sigma: T,
    left: Vec<T>,
    right: Vec<T>,
}

fn lexicographic<T: Real>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

/// Signed singular value decomposition of the correlation tensor.
///
/// Singular triples are ordered by decreasing magnitude, ties broken by the
/// lexicographic order of the left singular vectors. Each pair `(u, v)` is
/// signed so that the largest component of `u` is positive. Rotations with
/// determinant `-1` are fixed by negating their last row together with the
/// last diagonal entry.
pub fn schmidt_decompose<T: Real>(psi: &TwoGbitState<T>) -> SchmidtForm<T> {
    let d = psi.d();
    let svd = psi.t().clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");

    let mut triples: Vec<Triple<T>> = (0..d)
        .map(|k| {
            let mut left: Vec<T> = u.column(k).iter().copied().collect();
            let mut right: Vec<T> = v_t.row(k).iter().copied().collect();
            let mut lead = 0;
            for (i, val) in left.iter().enumerate() {
                if abs(*val) > abs(left[lead]) + T::tol(1e-12) {
                    lead = i;
                }
            }
            if left[lead] < T::zero() {
                left.iter_mut().for_each(|v| *v = -*v);
                right.iter_mut().for_each(|v| *v = -*v);
            }
            Triple {
                sigma: svd.singular_values[k],
                left,
                right,
            }
        })
        .collect();

    let tie = T::tol(1e-12);
    triples.sort_by(|a, b| {
        if abs(a.sigma - b.sigma) <= tie {
            lexicographic(&a.left, &b.left)
        } else {
            b.sigma.partial_cmp(&a.sigma).unwrap_or(Ordering::Equal)
        }
    });

    let mut r1 = DMatrix::from_fn(d, d, |i, j| triples[i].left[j]);
    let mut r2 = DMatrix::from_fn(d, d, |i, j| triples[i].right[j]);
    let mut t = DVector::from_fn(d, |i, _| triples[i].sigma);
    if d > 0 {
        let last = d - 1;
        if determinant(&r1) < T::zero() {
            r1.row_mut(last).neg_mut();
            t[last] = -t[last];
        }
        if determinant(&r2) < T::zero() {
            r2.row_mut(last).neg_mut();
            t[last] = -t[last];
        }
    }
    SchmidtForm {
        r1: OrthogonalMap::from_raw(r1),
        r2: OrthogonalMap::from_raw(r2),
        t,
    }
}
