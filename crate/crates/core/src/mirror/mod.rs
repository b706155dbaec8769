//! Mirror quantum mechanics: the partial transpose of ordinary two-qubit
//! theory. It is self-consistent for two gbits; on three gbits the mirrored
//! W state assigns a negative probability to a locally rotated mirror state.

mod report;
mod tables;
mod w;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::composite::TwoGbitState;
use crate::error::{Error, Result};
use crate::gbit::OrthogonalMap;
use crate::linalg::CMatrix;
use crate::quantum::{partial_transpose, partial_transpose_bloch, DensityMatrix, UnitaryMap};
use crate::scalar::Scalar;
use crate::serde_util::matrix_rows;

pub use report::{mirror_report, MirrorReport};
pub use tables::{bell_correlation_tables, BellRow, BellTables};
pub use w::{
    build_w_state, complete_unitary, mirror_w_inconsistency, mirror_w_inconsistency_exact,
    mirror_w_marginals, mirror_w_marginals_exact, w_density_exact, w_unitaries, WState,
};

/// Local Bloch vectors and correlation tensors of three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeGbitMarginals<T: Scalar> {
    pub x: DVector<T>,
    pub y: DVector<T>,
    pub z: DVector<T>,
    pub t12: DMatrix<T>,
    pub t13: DMatrix<T>,
    pub t23: DMatrix<T>,
    /// `T123[i][j][k] = Tr((s_i x s_j x s_k) rho)`, flattened as `9i + 3j + k`.
    pub t123: Option<Vec<T>>,
}

impl<T: Scalar> ThreeGbitMarginals<T> {
    /// Pauli expectations of a three-qubit operator (not necessarily positive).
    pub fn from_density(rho: &DensityMatrix<T>) -> Result<Self> {
        if rho.dim() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, found: rho.dim() });
        }
        let e = |idx: [usize; 3]| rho.pauli_expectation(&idx);
        let t123 = (0..27).map(|n| e([n / 9 + 1, (n / 3) % 3 + 1, n % 3 + 1])).collect();
        Ok(Self {
            x: DVector::from_fn(3, |i, _| e([i + 1, 0, 0])),
            y: DVector::from_fn(3, |i, _| e([0, i + 1, 0])),
            z: DVector::from_fn(3, |i, _| e([0, 0, i + 1])),
            t12: DMatrix::from_fn(3, 3, |i, j| e([i + 1, j + 1, 0])),
            t13: DMatrix::from_fn(3, 3, |i, j| e([i + 1, 0, j + 1])),
            t23: DMatrix::from_fn(3, 3, |i, j| e([0, i + 1, j + 1])),
            t123: Some(t123),
        })
    }

    /// Two-party reduction for parties `a < b` in `1..=3`.
    pub fn pair(&self, a: usize, b: usize) -> Result<TwoGbitState<T>> {
        let (x, y, t) = match (a, b) {
            (1, 2) => (&self.x, &self.y, &self.t12),
            (1, 3) => (&self.x, &self.z, &self.t13),
            (2, 3) => (&self.y, &self.z, &self.t23),
            _ => {
                let index = if (1..=3).contains(&a) { b } else { a };
                return Err(Error::InvalidSubsystem { index, parties: 3 });
            }
        };
        TwoGbitState::new(x.clone(), y.clone(), t.clone())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        [
            self.pair(1, 2).expect("valid pair").max_abs_diff(&other.pair(1, 2).expect("valid pair")),
            self.pair(1, 3).expect("valid pair").max_abs_diff(&other.pair(1, 3).expect("valid pair")),
            self.pair(2, 3).expect("valid pair").max_abs_diff(&other.pair(2, 3).expect("valid pair")),
        ]
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

impl<T: Scalar + Serialize> Serialize for ThreeGbitMarginals<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ThreeGbitMarginals", 7)?;
        st.serialize_field("x", self.x.as_slice())?;
        st.serialize_field("y", self.y.as_slice())?;
        st.serialize_field("z", self.z.as_slice())?;
        st.serialize_field("T12", &matrix_rows(&self.t12))?;
        st.serialize_field("T13", &matrix_rows(&self.t13))?;
        st.serialize_field("T23", &matrix_rows(&self.t23))?;
        st.serialize_field("T123", &self.t123)?;
        st.end()
    }
}

/// Partial transposition over subsystem 1 in Bloch form.
pub fn mirror_map<T: Scalar>(psi: &TwoGbitState<T>) -> Result<TwoGbitState<T>> {
    partial_transpose_bloch(psi, 1)
}

/// `(0, 0, diag[-1, -1, 1])`, the mirror maximally entangled state rotated
/// by `pi` about the third axis on the first party.
pub fn mirror_probe<T: Scalar>() -> TwoGbitState<T> {
    TwoGbitState::correlated_diagonal(&[-T::one(), -T::one(), T::one()])
}

/// Rotations `(R1, R2)` with `local_transform(R1, R2, psi_MQM) = mirror_probe()`.
pub fn probe_rotations<T: Scalar>() -> (OrthogonalMap<T>, OrthogonalMap<T>) {
    (OrthogonalMap::coordinate_flip(3, &[0, 1]), OrthogonalMap::identity(3))
}

/// The mirror image of a unitary: `rho -> PT1(U PT1(rho) U^dag)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorConjugation<T: Scalar> {
    u: UnitaryMap<T>,
}

pub fn mirror_group_conjugation<T: Scalar>(u: &UnitaryMap<T>) -> Result<MirrorConjugation<T>> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: u.dim() });
    }
    Ok(MirrorConjugation { u: u.clone() })
}

impl<T: Scalar> MirrorConjugation<T> {
    pub fn unitary(&self) -> &UnitaryMap<T> {
        &self.u
    }

    pub fn apply(&self, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        partial_transpose(&self.u.conjugate_operator(&partial_transpose(rho, 1)?), 1)
    }

    /// The same map written as `rho -> PT2(U* PT2(rho) U^T)`.
    pub fn apply_via_pt2(&self, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        let uc = self.u.conjugate();
        partial_transpose(&uc.conjugate_operator(&partial_transpose(rho, 2)?), 2)
    }

    /// Mirror of `self.u * other.u`, i.e. `self` applied after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { u: self.u.compose(&other.u) }
    }

    pub fn apply_bloch(&self, psi: &TwoGbitState<T>) -> Result<TwoGbitState<T>> {
        let rho = crate::quantum::density_from_bloch(psi)?;
        let out = DensityMatrix::new(self.apply(rho.matrix())?)?;
        crate::quantum::bloch_from_density(&out)
    }
}

#[cfg(test)]
mod tests;
