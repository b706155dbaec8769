use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::BlochState;
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::scalar::{sqrt, Real};

/// Positive-definite metric `D = S^T S / c^2` in which pure states satisfy
/// `x^T D x = 1` before whitening.
#[derive(Debug, Clone, PartialEq)]
pub struct FiducialMetric<T: Real> {
    d: DMatrix<T>,
    c: T,
}

impl<T: Real> FiducialMetric<T> {
    pub fn new(d: DMatrix<T>) -> Result<Self> {
        Self::with_scale(d, T::one())
    }

    pub fn with_scale(d: DMatrix<T>, c: T) -> Result<Self> {
        if !d.is_square() {
            return Err(Error::NotSquare {
                rows: d.nrows(),
                cols: d.ncols(),
            });
        }
        let asym = max_abs_diff(&d, &d.transpose());
        if asym > T::validity_tol() {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: f64::NAN,
            });
        }
        let eig = SymmetricEigen::new(d.clone());
        let min = eig.eigenvalues.iter().copied().fold(T::max_value().unwrap(), T::min);
        if min <= T::zero() {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min.as_f64(),
            });
        }
        Ok(Self { d, c })
    }

    /// Builds `D = S^T S / c^2` from an invertible shape matrix `S`.
    pub fn from_shape(s: &DMatrix<T>, c: T) -> Result<Self> {
        let d = s.transpose() * s / (c * c);
        Self::with_scale(d, c)
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.d
    }

    pub fn scale(&self) -> T {
        self.c
    }

    /// Symmetric square root of `D` (eigenvalues sorted descending).
    pub fn sqrt(&self) -> DMatrix<T> {
        let eig = SymmetricEigen::new(self.d.clone());
        let n = self.d.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .partial_cmp(&eig.eigenvalues[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut root = DMatrix::zeros(n, n);
        for &k in &order {
            let v = eig.eigenvectors.column(k);
            root += v * v.transpose() * sqrt(eig.eigenvalues[k]);
        }
        root
    }

    /// Measurement vector `r = D x` certifying the pure state `x`.
    pub fn measurement_vector(&self, x: &DVector<T>) -> DVector<T> {
        &self.d * x
    }

    /// `(1 + x1^T D x2) / 2` in raw, unwhitened coordinates.
    pub fn prob(&self, prepared: &DVector<T>, along: &DVector<T>) -> T {
        T::half() * (T::one() + prepared.dot(&(&self.d * along)))
    }
}

/// Maps raw coordinates to whitened ones, `y = D^{1/2} x`, where the pure
/// states form the unit sphere.
pub fn whiten<T: Real>(metric: &FiducialMetric<T>, raw: &DVector<T>) -> Result<BlochState<T>> {
    if raw.len() != metric.d.nrows() {
        return Err(Error::DimensionMismatch {
            expected: metric.d.nrows(),
            found: raw.len(),
        });
    }
    BlochState::new(metric.sqrt() * raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbit::measure_prob;
    use crate::random::{random_orthogonal, seeded_rng};
    use rand::Rng;

    #[test]
    fn identity_metric_is_noop() {
        let m = FiducialMetric::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        let x = DVector::from_vec(vec![0.1, 0.2, -0.3]);
        assert_eq!(whiten(&m, &x).unwrap().vector(), &x);
    }

    #[test]
    fn diagonal_metric() {
        let m = FiducialMetric::new(DMatrix::from_diagonal(&DVector::from_vec(vec![4.0f64, 1.0, 1.0])))
            .unwrap();
        let x = DVector::from_vec(vec![0.5f64, 0.0, 0.0]);
        assert!((x.dot(&(m.matrix() * &x)) - 1.0).abs() < 1e-15);
        let y = whiten(&m, &x).unwrap();
        assert!((y.vector() - DVector::from_vec(vec![1.0, 0.0, 0.0])).amax() < 1e-12);
        assert!((y.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_metrics_whiten_pure_states_to_unit_sphere() {
        let mut rng = seeded_rng(7, 0);
        for _ in 0..100 {
            let d = rng.random_range(2..7);
            let q = random_orthogonal(d, &mut rng);
            let eig = DVector::from_fn(d, |_, _| rng.random_range(0.2..5.0));
            let dm = q.matrix() * DMatrix::from_diagonal(&eig) * q.matrix().transpose();
            let dm = (&dm + dm.transpose()) * 0.5;
            let metric = FiducialMetric::new(dm.clone()).unwrap();
            let dir = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
            let x = &dir / dir.dot(&(&dm * &dir)).sqrt();
            let y = whiten(&metric, &x).unwrap();
            assert!((y.norm() - 1.0).abs() < 1e-12);
            // the state is its own measurement vector once whitened
            assert!((measure_prob(&y, &y).unwrap() - 1.0).abs() < 1e-12);
            assert!((metric.prob(&x, &x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn from_shape_matches_definition() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]);
        let m = FiducialMetric::from_shape(&s, 2.0).unwrap();
        let expected = s.transpose() * &s / 4.0;
        assert!((m.matrix() - expected).amax() < 1e-15);
        let root = m.sqrt();
        assert!((&root * &root - m.matrix()).amax() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_metric() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        assert!(matches!(
            FiducialMetric::new(d),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(FiducialMetric::new(asym).is_err());
    }
}
