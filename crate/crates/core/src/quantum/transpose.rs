//! Partial transposition, on matrices and on Bloch triples.

use rayon::prelude::*;

use super::{superop_deviation, UnitaryMap};
use crate::composite::TwoGbitState;
use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix};
use crate::random::{random_operator, seeded_rng};
use crate::scalar::Scalar;

/// Transposes tensor factor `subsystem` (1-based, leftmost = 1) of an
/// operator on 2 or 3 qubits.
pub fn partial_transpose<T: Scalar>(m: &CMatrix<T>, subsystem: usize) -> Result<CMatrix<T>> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let parties = match rows {
        4 => 2,
        8 => 3,
        _ => {
            return Err(Error::UnsupportedDimension {
                d: rows,
                reason: "partial transposition acts on 2 or 3 qubits",
            })
        }
    };
    if subsystem == 0 || subsystem > parties {
        return Err(Error::InvalidSubsystem { index: subsystem, parties });
    }
    let mask = 1usize << (parties - subsystem);
    let mut out = m.clone();
    for r in 0..rows {
        for c in 0..cols {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out[(r2, c2)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Partial transposition in Bloch form. Since `sigma_2^T = -sigma_2` and the
/// other Pauli matrices are symmetric, transposing subsystem 1 negates `x_2`
/// and row 2 of `T`; subsystem 2 negates `y_2` and column 2.
pub fn partial_transpose_bloch<T: Scalar>(psi: &TwoGbitState<T>, subsystem: usize) -> Result<TwoGbitState<T>> {
    if psi.d() != 3 {
        return Err(Error::UnsupportedDimension {
            d: psi.d(),
            reason: "partial transposition is defined for qubits (d = 3)",
        });
    }
    let (mut x, mut y, mut t) = (psi.x().clone(), psi.y().clone(), psi.t().clone());
    match subsystem {
        1 => {
            x[1] = -x[1];
            t.row_mut(1).neg_mut();
        }
        2 => {
            y[1] = -y[1];
            t.column_mut(1).neg_mut();
        }
        _ => return Err(Error::InvalidSubsystem { index: subsystem, parties: 2 }),
    }
    Ok(TwoGbitState::from_raw(x, y, t))
}

/// Max deviation between `X -> PT1(U PT1(X) U^dag)` and
/// `X -> PT2(U* PT2(X) U^T)` over `ops`.
pub fn lemma4_deviation<T: Scalar>(u: &UnitaryMap<T>, ops: &[CMatrix<T>]) -> Result<T> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: u.dim() });
    }
    if let Some(bad) = ops.iter().find(|x| x.shape() != (4, 4)) {
        return Err(Error::DimensionMismatch { expected: 4, found: bad.nrows() });
    }
    let pt = |x: &CMatrix<T>, k| partial_transpose(x, k).expect("4x4 operator");
    let uc = u.conjugate();
    Ok(superop_deviation(
        ops,
        |x| pt(&u.conjugate_operator(&pt(x, 1)), 1),
        |x| pt(&uc.conjugate_operator(&pt(x, 2)), 2),
    ))
}

/// [`lemma4_deviation`] on `samples` random product operators `A x B` and
/// `samples` random unstructured operators.
pub fn lemma4_identity_check(u: &UnitaryMap<f64>, samples: usize, seed: u64) -> Result<f64> {
    let ops: Vec<CMatrix<f64>> = (0..2 * samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(seed, k);
            if k % 2 == 0 {
                kron(&random_operator(2, &mut rng), &random_operator(2, &mut rng))
            } else {
                random_operator(4, &mut rng)
            }
        })
        .collect();
    lemma4_deviation(u, &ops)
}
