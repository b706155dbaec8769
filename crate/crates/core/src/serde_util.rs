use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub(crate) fn matrix_rows<T: Scalar>(m: &DMatrix<T>) -> Vec<Vec<T>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

pub(crate) fn matrix_from_rows<T: Scalar>(rows: Vec<Vec<T>>) -> Result<DMatrix<T>, String> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err("ragged matrix rows".into());
    }
    Ok(DMatrix::from_row_iterator(n, m, rows.into_iter().flatten()))
}

/// Complex matrix as `{"re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMatrixRepr<T> {
    pub re: Vec<Vec<T>>,
    pub im: Vec<Vec<T>>,
}

impl<T: Scalar> ComplexMatrixRepr<T> {
    pub fn from_matrix(m: &DMatrix<Complex<T>>) -> Self {
        Self {
            re: matrix_rows(&m.map(|z| z.re)),
            im: matrix_rows(&m.map(|z| z.im)),
        }
    }

    pub fn into_matrix(self) -> Result<DMatrix<Complex<T>>, String> {
        let re = matrix_from_rows(self.re)?;
        let im = matrix_from_rows(self.im)?;
        if re.shape() != im.shape() {
            return Err("real and imaginary parts differ in shape".into());
        }
        Ok(re.zip_map(&im, Complex::new))
    }
}
