//! Two-qubit quantum mechanics as the `d = 3` instance of the composite
//! formalism: Pauli expansions, density matrices, and the SU(2) to SO(3)
//! covering map.
//!
//! Conventions: `sigma_1 = X`, `sigma_2 = Y`, `sigma_3 = Z`; `|0>` is the
//! `+1` eigenstate of `Z`; in a tensor product the leftmost factor is
//! subsystem 1 and owns the most significant bit of the basis index.

mod transpose;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::composite::{local_transform, TwoGbitState};
use crate::error::{Error, Result};
use crate::gbit::{BlochState, OrthogonalMap};
use crate::linalg::{
    c, cmax_abs_diff, complex_identity, conjugate, creal, dagger, kron, trace, trace_of_product, CMatrix,
    CVector,
};
use crate::scalar::{abs, max, Real, Scalar};
use crate::serde_util::ComplexMatrixRepr;

pub use transpose::{
    lemma4_deviation, lemma4_identity_check, partial_transpose, partial_transpose_bloch,
};

/// Pauli matrix `sigma_k`, `k` in `1..=3`.
pub fn pauli<T: Scalar>(k: usize) -> CMatrix<T> {
    let (o, z) = (T::one(), T::zero());
    let entries = match k {
        1 => [creal(z), creal(o), creal(o), creal(z)],
        2 => [creal(z), c(z, -o), c(z, o), creal(z)],
        3 => [creal(o), creal(z), creal(z), creal(-o)],
        _ => panic!("Pauli index {k} outside 1..=3"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

fn qubit_count(dim: usize) -> Option<usize> {
    match dim {
        2 => Some(1),
        4 => Some(2),
        8 => Some(3),
        _ => None,
    }
}

fn check_square(m: &CMatrix<impl Scalar>) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if qubit_count(rows).is_none() {
        return Err(Error::UnsupportedDimension {
            d: rows,
            reason: "operators act on 1, 2 or 3 qubits",
        });
    }
    Ok(rows)
}

/// Hermitian, unit-trace operator on 1 to 3 qubits.
///
/// Positivity is not required: partial transposes of entangled states are
/// carried around on purpose. Use [`DensityMatrix::is_physical`] to tell.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    m: CMatrix<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        check_square(&m)?;
        let tol = T::equality_tol();
        let dev = cmax_abs_diff(&m, &dagger(&m));
        if dev > tol {
            return Err(Error::NotHermitian { deviation: dev.as_f64() });
        }
        let tr = trace(&m);
        if abs(tr.re - T::one()) > tol || abs(tr.im) > tol {
            return Err(Error::TraceNotOne { trace: tr.re.as_f64() });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_raw(m: CMatrix<T>) -> Self {
        Self { m }
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn from_pure(psi: &CVector<T>) -> Result<Self> {
        let n = psi.len();
        let m = DMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj());
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn qubits(&self) -> usize {
        qubit_count(self.dim()).expect("validated dimension")
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.m
    }

    /// `Tr(rho sigma)` for another operator of the same size (real part).
    pub fn overlap(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(trace_of_product(&self.m, &other.m).re)
    }

    /// Partial transpose over `subsystem` (1-based).
    pub fn partial_transpose(&self, subsystem: usize) -> Result<Self> {
        partial_transpose(&self.m, subsystem).map(Self::from_raw)
    }

    /// Expectation `Tr(rho (sigma_{k1} x ... x sigma_{kn}))`, with index 0
    /// standing for the identity on that qubit.
    pub fn pauli_expectation(&self, indices: &[usize]) -> T {
        assert_eq!(indices.len(), self.qubits(), "one Pauli index per qubit");
        trace_of_product(&pauli_string(indices), &self.m).re
    }
}

impl<T: Real> DensityMatrix<T> {
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut ev: Vec<T> = self.m.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        ev
    }

    pub fn min_eigenvalue(&self) -> T {
        *self.eigenvalues().last().expect("non-empty spectrum")
    }

    /// Positive semidefinite up to `-1e-9`.
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue() >= -T::validity_tol()
    }
}

impl<T: Scalar + Serialize> Serialize for DensityMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexMatrixRepr::from_matrix(&self.m).serialize(s)
    }
}

fn complex_from_repr<'de, T, D>(d: D) -> std::result::Result<CMatrix<T>, D::Error>
where
    T: Scalar + Deserialize<'de>,
    D: Deserializer<'de>,
{
    ComplexMatrixRepr::<T>::deserialize(d)?
        .into_matrix()
        .map_err(serde::de::Error::custom)
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for DensityMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::new(complex_from_repr(d)?).map_err(serde::de::Error::custom)
    }
}

/// Unitary operator on 1 to 3 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap<T: Scalar> {
    u: CMatrix<T>,
}

impl<T: Scalar> UnitaryMap<T> {
    pub fn new(u: CMatrix<T>) -> Result<Self> {
        let n = check_square(&u)?;
        let dev = cmax_abs_diff(&(dagger(&u) * &u), &complex_identity(n));
        if dev > T::equality_tol() {
            return Err(Error::NotUnitary { deviation: dev.as_f64() });
        }
        Ok(Self { u })
    }

    pub(crate) fn from_raw(u: CMatrix<T>) -> Self {
        Self { u }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(complex_identity(dim)).expect("supported dimension")
    }

    /// Exchange of two qubits.
    pub fn swap() -> Self {
        let mut u = DMatrix::from_element(4, 4, creal(T::zero()));
        for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            u[(i, j)] = creal(T::one());
        }
        Self { u }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.u
    }

    pub fn adjoint(&self) -> Self {
        Self { u: dagger(&self.u) }
    }

    /// Complex conjugate `U*`.
    pub fn conjugate(&self) -> Self {
        Self { u: conjugate(&self.u) }
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { u: &self.u * &other.u }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let u = kron(&self.u, &other.u);
        check_square(&u)?;
        Ok(Self { u })
    }

    /// `U X U^dagger`.
    pub fn conjugate_operator(&self, x: &CMatrix<T>) -> CMatrix<T> {
        &self.u * x * dagger(&self.u)
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> DensityMatrix<T> {
        DensityMatrix::from_raw(self.conjugate_operator(rho.matrix()))
    }

    pub fn apply_vector(&self, psi: &CVector<T>) -> CVector<T> {
        &self.u * psi
    }
}

impl<T: Scalar + Serialize> Serialize for UnitaryMap<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexMatrixRepr::from_matrix(&self.u).serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for UnitaryMap<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::new(complex_from_repr(d)?).map_err(serde::de::Error::custom)
    }
}

/// `sigma_{k1} x ... x sigma_{kn}` with `0` for the identity.
pub fn pauli_string<T: Scalar>(indices: &[usize]) -> CMatrix<T> {
    indices.iter().fold(complex_identity(1), |acc, &k| {
        let factor = if k == 0 { complex_identity(2) } else { pauli(k) };
        kron(&acc, &factor)
    })
}

fn require_qubit_dim(d: usize) -> Result<()> {
    if d != 3 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "the qubit correspondence needs d = 3",
        });
    }
    Ok(())
}

/// `rho = (1 + sum x_i sigma_i) / 2`.
pub fn density_from_qubit_bloch<T: Scalar>(x: &BlochState<T>) -> Result<DensityMatrix<T>> {
    require_qubit_dim(x.d())?;
    let mut m = complex_identity(2);
    for i in 0..3 {
        m += pauli::<T>(i + 1) * creal(x.vector()[i]);
    }
    Ok(DensityMatrix::from_raw(m * creal(T::half())))
}

/// `x_i = Tr(sigma_i rho)`.
pub fn qubit_bloch_from_density<T: Scalar>(rho: &DensityMatrix<T>) -> Result<BlochState<T>> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: rho.dim() });
    }
    let x = DVector::from_fn(3, |i, _| rho.pauli_expectation(&[i + 1]));
    BlochState::new(x)
}

/// `rho = (1x1 + sum x_i s_i x 1 + sum y_j 1 x s_j + sum T_ij s_i x s_j) / 4`.
///
/// Defined for any `(x, y, T)` with `d = 3`; the result is positive only for
/// states of ordinary quantum theory.
pub fn density_from_bloch<T: Scalar>(psi: &TwoGbitState<T>) -> Result<DensityMatrix<T>> {
    require_qubit_dim(psi.d())?;
    let mut m = complex_identity(4);
    for i in 0..3 {
        m += pauli_string::<T>(&[i + 1, 0]) * creal(psi.x()[i]);
        m += pauli_string::<T>(&[0, i + 1]) * creal(psi.y()[i]);
        for j in 0..3 {
            m += pauli_string::<T>(&[i + 1, j + 1]) * creal(psi.t()[(i, j)]);
        }
    }
    Ok(DensityMatrix::from_raw(m * creal(T::quarter())))
}

/// Inverse of [`density_from_bloch`]: `x_i = Tr((s_i x 1) rho)`,
/// `y_j = Tr((1 x s_j) rho)`, `T_ij = Tr((s_i x s_j) rho)`.
pub fn bloch_from_density<T: Scalar>(rho: &DensityMatrix<T>) -> Result<TwoGbitState<T>> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    let x = DVector::from_fn(3, |i, _| rho.pauli_expectation(&[i + 1, 0]));
    let y = DVector::from_fn(3, |i, _| rho.pauli_expectation(&[0, i + 1]));
    let t = DMatrix::from_fn(3, 3, |i, j| rho.pauli_expectation(&[i + 1, j + 1]));
    Ok(TwoGbitState::from_raw(x, y, t))
}

/// Bloch image of a normalized two-qubit state vector.
pub fn bloch_from_state_vector<T: Scalar>(psi: &CVector<T>) -> Result<TwoGbitState<T>> {
    bloch_from_density(&DensityMatrix::from_pure(psi)?)
}

/// `R_ij = Tr(sigma_i U sigma_j U^dagger) / 2`.
pub fn su2_to_so3<T: Scalar>(u: &UnitaryMap<T>) -> Result<OrthogonalMap<T>> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: u.dim() });
    }
    let r = DMatrix::from_fn(3, 3, |i, j| {
        let rotated = u.conjugate_operator(&pauli(j + 1));
        trace_of_product(&pauli(i + 1), &rotated).re * T::half()
    });
    Ok(OrthogonalMap::from_raw(r))
}

/// `exp(-i angle n.sigma / 2)` for a unit axis `n`.
pub fn qubit_rotation<T: Real>(axis: [T; 3], angle: T) -> UnitaryMap<T> {
    let half = angle * T::half();
    let (s, cs) = (half.sin(), half.cos());
    let mut u = complex_identity::<T>(2) * creal(cs);
    for (k, n) in axis.iter().enumerate() {
        u -= pauli::<T>(k + 1) * c(T::zero(), s * *n);
    }
    UnitaryMap::from_raw(u)
}

/// Rotation taking the correlation-axis convention (first axis singled
/// out) to the computational one (third axis diagonal): `e1 -> e3`,
/// `e2 -> -e2`, `e3 -> e1`.
pub fn axis_relabel<T: Scalar>() -> OrthogonalMap<T> {
    let (o, z) = (T::one(), T::zero());
    OrthogonalMap::from_raw(DMatrix::from_row_slice(3, 3, &[z, z, o, z, -o, z, o, z, z]))
}

/// Re-expresses a `d = 3` state written with the correlation axis first in
/// computational coordinates.
pub fn to_computational<T: Scalar>(psi: &TwoGbitState<T>) -> Result<TwoGbitState<T>> {
    require_qubit_dim(psi.d())?;
    let p = axis_relabel();
    local_transform(&p, &p, psi)
}

/// Point on the circle of Schmidt states.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtCirclePoint<T: Scalar> {
    /// `(cos a e1, cos a e1, diag[1, -sin a, sin a])`, correlation axis first.
    pub bloch: TwoGbitState<T>,
    /// `cos(a/2)|00> + sin(a/2)|11>`.
    pub vector: CVector<T>,
}

pub fn schmidt_circle<T: Real>(angle: T) -> SchmidtCirclePoint<T> {
    let (s, cs) = (angle.sin(), angle.cos());
    let e1 = DVector::from_fn(3, |i, _| if i == 0 { cs } else { T::zero() });
    let t = DMatrix::from_diagonal(&DVector::from_vec(vec![T::one(), -s, s]));
    let half = angle * T::half();
    let mut vector = DVector::from_element(4, creal(T::zero()));
    vector[0] = creal(half.cos());
    vector[3] = creal(half.sin());
    SchmidtCirclePoint {
        bloch: TwoGbitState::from_raw(e1.clone(), e1, t),
        vector,
    }
}

/// `|<phi|psi>|^2`.
pub fn transition_probability<T: Scalar>(phi: &CVector<T>, psi: &CVector<T>) -> T {
    let amp = phi
        .iter()
        .zip(psi.iter())
        .fold(creal(T::zero()), |acc, (a, b)| acc + a.conj() * *b);
    amp.re * amp.re + amp.im * amp.im
}

/// Largest entrywise deviation between two super-operators on `ops`.
pub(crate) fn superop_deviation<T: Scalar>(
    ops: &[CMatrix<T>],
    f: impl Fn(&CMatrix<T>) -> CMatrix<T>,
    g: impl Fn(&CMatrix<T>) -> CMatrix<T>,
) -> T {
    ops.iter().fold(T::zero(), |acc, x| max(acc, cmax_abs_diff(&f(x), &g(x))))
}
