use super::field::{Coefficients, Scalar};
use super::linalg::{column_basis, independent_columns, left_inverse, rank};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Quotient `Z / B` of two subspaces of `F^n`, given by spanning columns.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: usize,
    /// Columns represent a basis of the quotient.
    pub reps: Matrix,
    basis: Matrix,
    left: Matrix,
    nb: usize,
    coeff: Coefficients,
}

impl Subquotient {
    pub fn new(top: &Matrix, bottom: &Matrix, k: &Coefficients) -> Result<Self> {
        k.require_field()?;
        let n = top.rows();
        if bottom.rows() != n {
            return Err(Error::DimensionMismatch("subquotient ambient dimension".into()));
        }
        let b = column_basis(bottom, k);
        let z = column_basis(top, k);
        if rank(&z.hstack(&b)?, k) != z.cols() {
            return Err(Error::Inconsistent("bottom is not contained in top".into()));
        }
        let joined = b.hstack(&z)?;
        let idx = independent_columns(&joined, k);
        let nb = b.cols();
        let rep_idx: Vec<usize> = idx.iter().copied().filter(|&i| i >= nb).collect();
        let reps = joined.select_columns(&rep_idx);
        let basis = b.hstack(&reps)?;
        let left = left_inverse(&basis, k)?;
        Ok(Subquotient { ambient: n, reps, basis, left, nb, coeff: k.clone() })
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let c = self.left.apply(v, &self.coeff);
        self.basis.apply(&c, &self.coeff) == v
    }

    /// Coordinates in the quotient basis of an element of the top space.
    pub fn coords(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let c = self.left.apply(v, &self.coeff);
        if self.basis.apply(&c, &self.coeff) != v {
            return Err(Error::Inconsistent("vector is not in the top space".into()));
        }
        Ok(c[self.nb..].to_vec())
    }

    /// Matrix (columns) of coordinates of many vectors given as columns.
    pub fn coords_matrix(&self, vs: &Matrix) -> Result<Matrix> {
        let cols = vs
            .columns()
            .iter()
            .map(|v| self.coords(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(&cols, self.dim()))
    }

    /// Matrix of the map induced by `f` into `target`.
    pub fn induced(&self, f: &Matrix, target: &Subquotient) -> Result<Matrix> {
        target.coords_matrix(&f.mm(&self.reps, &self.coeff))
    }
}
