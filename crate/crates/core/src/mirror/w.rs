//! The W state built from two entangling unitaries, and its mirror image.

use nalgebra::DMatrix;
use num_rational::Rational64;

use super::{mirror_probe, ThreeGbitMarginals};
use crate::composite::composite_prob;
use crate::error::{Error, Result};
use crate::linalg::{c, creal, kron, CMatrix, CVector};
use crate::quantum::{DensityMatrix, UnitaryMap};
use crate::scalar::Scalar;

/// Unitary on `C^n` with the given columns at the given input indices.
/// Remaining columns, in ascending order, are filled by Gram-Schmidt on the
/// computational basis vectors taken in ascending order.
pub fn complete_unitary(n: usize, specified: &[(usize, CVector<f64>)]) -> Result<UnitaryMap<f64>> {
    let mut columns: Vec<Option<CVector<f64>>> = vec![None; n];
    for (k, v) in specified {
        if *k >= n || v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len().max(*k + 1) });
        }
        columns[*k] = Some(v.clone());
    }
    let mut basis: Vec<CVector<f64>> = columns.iter().flatten().cloned().collect();
    let mut candidates = (0..n).map(|i| {
        let mut e = CVector::from_element(n, creal(0.0));
        e[i] = creal(1.0);
        e
    });
    for slot in columns.iter_mut().filter(|s| s.is_none()) {
        let next = candidates.find_map(|mut v| {
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
            let norm = v.norm();
            (norm > 1e-9).then(|| v.unscale(norm))
        });
        let v = next.ok_or(Error::Malformed("specified columns are not orthonormal".into()))?;
        basis.push(v.clone());
        *slot = Some(v);
    }
    let cols: Vec<CVector<f64>> = columns.into_iter().flatten().collect();
    UnitaryMap::new(DMatrix::from_columns(&cols))
}

fn ket(n: usize, amplitudes: &[(usize, f64)]) -> CVector<f64> {
    let mut v = CVector::from_element(n, creal(0.0));
    for &(i, a) in amplitudes {
        v[i] = c(a, 0.0);
    }
    v
}

/// `(U12, U23)` with `U12|00> = |00>`, `U12|01> = (|01> + |10>)/sqrt 2` and
/// `U23|00> = |01>/sqrt 3 + sqrt(2/3) |10>`.
pub fn w_unitaries() -> (UnitaryMap<f64>, UnitaryMap<f64>) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let u12 = complete_unitary(4, &[(0, ket(4, &[(0, 1.0)])), (1, ket(4, &[(1, r), (2, r)]))])
        .expect("orthonormal columns");
    let u23 = complete_unitary(4, &[(0, ket(4, &[(1, (1.0f64 / 3.0).sqrt()), (2, (2.0f64 / 3.0).sqrt())]))])
        .expect("orthonormal column");
    (u12, u23)
}

#[derive(Debug, Clone)]
pub struct WState {
    /// `(U12 x 1)(1 x U23)|000>`.
    pub vector: CVector<f64>,
    pub density: DensityMatrix<f64>,
    pub marginals: ThreeGbitMarginals<f64>,
}

pub fn build_w_state() -> WState {
    let (u12, u23) = w_unitaries();
    let id2: CMatrix<f64> = UnitaryMap::identity(2).matrix().clone();
    let first = kron(&id2, u23.matrix());
    let second = kron(u12.matrix(), &id2);
    let vector = second * first * ket(8, &[(0, 1.0)]);
    let density = DensityMatrix::from_pure(&vector).expect("normalized vector");
    let marginals = ThreeGbitMarginals::from_density(&density).expect("three qubits");
    WState { vector, density, marginals }
}

/// `|W><W|` with exact entries: `1/3` on the support `{001, 010, 100}`.
pub fn w_density_exact() -> DensityMatrix<Rational64> {
    let mut m = DMatrix::from_element(8, 8, creal(Rational64::from_integer(0)));
    for i in [1, 2, 4] {
        for j in [1, 2, 4] {
            m[(i, j)] = creal(Rational64::new(1, 3));
        }
    }
    DensityMatrix::new(m).expect("hermitian with unit trace")
}

fn mirrored<T: Scalar>(rho: &DensityMatrix<T>) -> ThreeGbitMarginals<T> {
    let pt = rho.partial_transpose(2).expect("three qubits");
    ThreeGbitMarginals::from_density(&pt).expect("three qubits")
}

/// Marginals of the W state transposed on subsystem 2.
pub fn mirror_w_marginals() -> ThreeGbitMarginals<f64> {
    mirrored(&build_w_state().density)
}

pub fn mirror_w_marginals_exact() -> ThreeGbitMarginals<Rational64> {
    mirrored(&w_density_exact())
}

fn inconsistency<T: Scalar>(m: &ThreeGbitMarginals<T>) -> T {
    let psi13 = m.pair(1, 3).expect("valid reduction");
    composite_prob(&mirror_probe(), &psi13).expect("d = 3")
}

/// `P(probe, psi13)` for the mirror W state; negative.
pub fn mirror_w_inconsistency() -> f64 {
    inconsistency(&mirror_w_marginals())
}

pub fn mirror_w_inconsistency_exact() -> Rational64 {
    inconsistency(&mirror_w_marginals_exact())
}
