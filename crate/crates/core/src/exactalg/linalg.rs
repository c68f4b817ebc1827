//! Gaussian elimination over ℚ or 𝔽_p.
//!
//! Rank-type quantities over ℤ are computed in ℚ; anything returning a basis
//! or a solution requires a field.

use num_traits::{One, Zero};

use super::field::{int, Coefficients, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Field used for rank computations: ℤ is promoted to ℚ.
pub fn rank_field(k: &Coefficients) -> Coefficients {
    match k {
        Coefficients::Integers => Coefficients::Rationals,
        other => other.clone(),
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(a: &Matrix, k: &Coefficients) -> (Matrix, Vec<usize>) {
    let k = rank_field(k);
    let mut m = a.normalized(&k);
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let t = m.get(p, j).clone();
                m.set(p, j, m.get(r, j).clone());
                m.set(r, j, t);
            }
        }
        let inv = k.inverse(m.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let x = k.mul(m.get(r, j), &inv);
            m.set(r, j, x);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let x = k.sub(m.get(i, j), &k.mul(&f, m.get(r, j)));
                m.set(i, j, x);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix, k: &Coefficients) -> usize {
    rref(a, k).1.len()
}

/// Columns form a basis of the kernel.
pub fn kernel(a: &Matrix, k: &Coefficients) -> Result<Matrix> {
    k.require_field()?;
    let (r, pivots) = rref(a, k);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zeros(n, free.len());
    for (t, &f) in free.iter().enumerate() {
        out.set(f, t, int(1));
        for (i, &p) in pivots.iter().enumerate() {
            out.set(p, t, k.neg(r.get(i, f)));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct KernelImage {
    pub rank: usize,
    pub nullity: usize,
    /// Columns span the kernel.
    pub kernel: Matrix,
    /// Columns span the image.
    pub image: Matrix,
}

/// Rank, nullity and exact bases; over ℤ use Smith normal form instead.
pub fn kernel_image_ranks(a: &Matrix, k: &Coefficients) -> Result<KernelImage> {
    let kernel = kernel(a, k)?;
    let image = column_basis(a, k);
    debug_assert!(a.mm(&kernel, k).is_zero());
    Ok(KernelImage { rank: image.cols(), nullity: kernel.cols(), kernel, image })
}

/// Indices of a maximal independent set of columns (leftmost choice).
pub fn independent_columns(a: &Matrix, k: &Coefficients) -> Vec<usize> {
    rref(a, k).1
}

/// Columns form a basis of the column space, chosen among the columns of `a`.
pub fn column_basis(a: &Matrix, k: &Coefficients) -> Matrix {
    a.select_columns(&independent_columns(a, k))
}

/// Some `X` with `A X = B`, if one exists.
pub fn solve(a: &Matrix, b: &Matrix, k: &Coefficients) -> Result<Option<Matrix>> {
    k.require_field()?;
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch("solve: row counts differ".into()));
    }
    let aug = a.hstack(b)?;
    let (r, pivots) = rref(&aug, k);
    let n = a.cols();
    if pivots.iter().any(|&p| p >= n) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, r.get(i, n + j).clone());
        }
    }
    Ok(Some(x))
}

pub fn inverse(a: &Matrix, k: &Coefficients) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of non-square matrix".into()));
    }
    let n = a.rows();
    match k {
        Coefficients::Integers => {
            let inv = inverse(a, &Coefficients::Rationals)?;
            if inv.is_integral() {
                Ok(inv)
            } else {
                Err(Error::Inconsistent("matrix is not unimodular".into()))
            }
        }
        _ if n == 0 => Ok(Matrix::zeros(0, 0)),
        _ => {
            let (r, pivots) = rref(&a.hstack(&Matrix::identity(n))?, k);
            if pivots.len() < n || pivots[n - 1] >= n {
                return Err(Error::Inconsistent("matrix is singular".into()));
            }
            let cols: Vec<usize> = (n..2 * n).collect();
            let rows: Vec<usize> = (0..n).collect();
            Ok(r.submatrix(&rows, &cols))
        }
    }
}

/// `L` with `L A = I` for a matrix of full column rank.
pub fn left_inverse(a: &Matrix, k: &Coefficients) -> Result<Matrix> {
    k.require_field()?;
    let (m, n) = a.shape();
    // complete the columns of A to a basis, invert, keep the first n rows
    let ext = a.hstack(&Matrix::identity(m))?;
    let basis = independent_columns(&ext, k);
    if n > m || basis.len() < m || basis[..n] != (0..n).collect::<Vec<_>>()[..] {
        return Err(Error::Inconsistent("left inverse of non-injective map".into()));
    }
    let square = ext.select_columns(&basis);
    let inv = inverse(&square, k)?;
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..m).collect();
    Ok(inv.submatrix(&rows, &cols))
}

pub fn is_identity(a: &Matrix) -> bool {
    a.is_square()
        && (0..a.rows()).all(|i| {
            (0..a.cols()).all(|j| {
                let x = a.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
}

/// Determinant by elimination (exact, any coefficients).
pub fn determinant(a: &Matrix, k: &Coefficients) -> Result<Scalar> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let f = rank_field(k);
    let mut m = a.normalized(&f);
    let n = m.rows();
    let mut det = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
            return Ok(Scalar::zero());
        };
        if p != c {
            for j in 0..n {
                let t = m.get(p, j).clone();
                m.set(p, j, m.get(c, j).clone());
                m.set(c, j, t);
            }
            det = f.neg(&det);
        }
        let piv = m.get(c, c).clone();
        det = f.mul(&det, &piv);
        let inv = f.inverse(&piv)?;
        for i in c + 1..n {
            let factor = f.mul(m.get(i, c), &inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let x = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, x);
            }
        }
    }
    Ok(k.normalize(det))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(rows, 0).unwrap()
    }

    #[test]
    fn kernel_is_annihilated() {
        let q = Coefficients::Rationals;
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = kernel(&a, &q).unwrap();
        assert_eq!(ker.cols(), 2);
        assert!(a.mm(&ker, &q).is_zero());
        assert_eq!(rank(&a, &q), 1);
    }

    #[test]
    fn kernel_image_over_f2() {
        let f2 = Coefficients::prime_field(2).unwrap();
        let ki = kernel_image_ranks(&m(&[vec![1, 1], vec![1, 1]]), &f2).unwrap();
        assert_eq!((ki.rank, ki.nullity), (1, 1));
        assert_eq!(ki.kernel.column(0), vec![int(1), int(1)]);
        let z = kernel_image_ranks(&Matrix::zeros(2, 3), &f2).unwrap();
        assert_eq!((z.rank, z.nullity), (0, 3));
        assert!(kernel_image_ranks(&Matrix::identity(3), &Coefficients::Integers).is_err());
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let a = m(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(rank(&a, &Coefficients::Rationals), 2);
        assert_eq!(rank(&a, &Coefficients::prime_field(2).unwrap()), 0);
        assert_eq!(rank(&a, &Coefficients::Integers), 2);
    }

    #[test]
    fn inverse_and_solve() {
        let q = Coefficients::Rationals;
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let inv = inverse(&a, &q).unwrap();
        assert!(is_identity(&a.mm(&inv, &q)));
        let b = m(&[vec![3], vec![2]]);
        let x = solve(&a, &b, &q).unwrap().unwrap();
        assert_eq!(a.mm(&x, &q), b);
        let sing = m(&[vec![1, 1], vec![1, 1]]);
        assert!(inverse(&sing, &q).is_err());
        assert!(solve(&sing, &m(&[vec![1], vec![0]]), &q).unwrap().is_none());
        assert!(inverse(&m(&[vec![2]]), &Coefficients::Integers).is_err());
    }

    #[test]
    fn left_inverse_of_injection() {
        let q = Coefficients::Rationals;
        let a = m(&[vec![1, 0], vec![1, 1], vec![0, 2]]);
        let l = left_inverse(&a, &q).unwrap();
        assert!(is_identity(&l.mm(&a, &q)));
    }

    #[test]
    fn determinant_values() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(determinant(&a, &Coefficients::Integers).unwrap(), int(1));
        let b = m(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&b, &Coefficients::Rationals).unwrap(), int(-1));
    }
}
