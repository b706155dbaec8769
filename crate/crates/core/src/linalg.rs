//! Small dense helpers that nalgebra only offers for real/complex fields.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::scalar::{abs, max, Scalar};

pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Determinant by Gaussian elimination with largest-magnitude pivoting.
/// Exact on rationals.
pub fn determinant<T: Scalar>(m: &DMatrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = T::one();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if abs(a[(row, col)]) > abs(a[(pivot, col)]) {
                pivot = row;
            }
        }
        if a[(pivot, col)].is_zero() {
            return T::zero();
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for row in col + 1..n {
            let factor = a[(row, col)] / p;
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let v = a[(col, k)];
                a[(row, k)] -= factor * v;
            }
        }
    }
    det
}

/// Largest entrywise deviation of `m` from the identity.
pub fn identity_deviation<T: Scalar>(m: &DMatrix<T>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = max(worst, abs(m[(i, j)] - target));
        }
    }
    worst
}

pub fn dot<T: Scalar>(a: &DVector<T>, b: &DVector<T>) -> T {
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

pub fn norm_sq<T: Scalar>(a: &DVector<T>) -> T {
    dot(a, a)
}

/// Hilbert-Schmidt inner product `Tr(A^T B)`.
pub fn frobenius_dot<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> T {
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

pub fn frobenius_sq<T: Scalar>(a: &DMatrix<T>) -> T {
    frobenius_dot(a, a)
}

pub fn outer<T: Scalar>(a: &DVector<T>, b: &DVector<T>) -> DMatrix<T> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j])
}

pub fn max_abs_diff<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| max(acc, abs(*x - *y)))
}

pub fn c<T: Scalar>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub fn creal<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub fn dagger<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    DMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

pub fn conjugate<T: Scalar>(m: &CMatrix<T>) -> CMatrix<T> {
    m.map(|z| z.conj())
}

pub fn trace<T: Scalar>(m: &CMatrix<T>) -> Complex<T> {
    (0..m.nrows().min(m.ncols())).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + m[(i, i)])
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn complex_identity<T: Scalar>(n: usize) -> CMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { creal(T::one()) } else { creal(T::zero()) })
}

/// Largest modulus of an entrywise difference, measured as `max(|re|, |im|)`.
pub fn cmax_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| {
        let d = *x - *y;
        max(acc, max(abs(d.re), abs(d.im)))
    })
}
