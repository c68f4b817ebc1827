//! Smith normal form over ℤ with unimodular transforms and their inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        Ok(IntMatrix { rows: m.rows(), cols: m.cols(), data: m.to_bigint_rows()? })
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_bigint_rows(&self.data, self.cols)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "IntMatrix shapes");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self.data[i][l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += a * &other.data[l][j];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row_i += c * row_t
    fn row_add(&mut self, i: usize, t: usize, c: &BigInt) {
        for j in 0..self.cols {
            let x = &self.data[t][j] * c;
            self.data[i][j] += x;
        }
    }

    /// col_j += c * col_t
    fn col_add(&mut self, j: usize, t: usize, c: &BigInt) {
        for r in &mut self.data {
            let x = &r[t] * c;
            r[j] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -x.clone();
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in &mut self.data {
            r[j] = -r[j].clone();
        }
    }
}

/// `u * a * v = d` with `d` diagonal, nonnegative, each entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.data[i][i].clone()).collect()
    }
}

struct State {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl State {
    fn swap_rows(&mut self, i: usize, t: usize) {
        if i == t {
            return;
        }
        self.a.swap_rows(i, t);
        self.u.swap_rows(i, t);
        self.u_inv.swap_cols(i, t);
    }

    fn swap_cols(&mut self, j: usize, t: usize) {
        if j == t {
            return;
        }
        self.a.swap_cols(j, t);
        self.v.swap_cols(j, t);
        self.v_inv.swap_rows(j, t);
    }

    fn row_add(&mut self, i: usize, t: usize, c: &BigInt) {
        self.a.row_add(i, t, c);
        self.u.row_add(i, t, c);
        self.u_inv.col_add(t, i, &-c);
    }

    fn col_add(&mut self, j: usize, t: usize, c: &BigInt) {
        self.a.col_add(j, t, c);
        self.v.col_add(j, t, c);
        self.v_inv.row_add(t, j, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut s = State {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &s.a.data[i][j];
                if !x.is_zero()
                    && best.is_none_or(|(bi, bj)| x.abs() < s.a.data[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(pi, t);
        s.swap_cols(pj, t);
        let mut clean = true;
        for i in t + 1..m {
            if !s.a.data[i][t].is_zero() {
                let q = s.a.data[i][t].div_floor(&s.a.data[t][t]);
                s.row_add(i, t, &-q);
                if !s.a.data[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..n {
            if !s.a.data[t][j].is_zero() {
                let q = s.a.data[t][j].div_floor(&s.a.data[t][t]);
                s.col_add(j, t, &-q);
                if !s.a.data[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        let p = s.a.data[t][t].clone();
        let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.a.data[i][j].is_multiple_of(&p)));
        if let Some(i) = bad {
            s.row_add(t, i, &BigInt::one());
            continue;
        }
        if p.is_negative() {
            s.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition { u: s.u, u_inv: s.u_inv, v: s.v, v_inv: s.v_inv, d: s.a, rank: t }
}

pub fn invariant_factors(a: &Matrix) -> Result<Vec<BigInt>> {
    Ok(smith(&IntMatrix::from_matrix(a)?).invariant_factors())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn im(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        }
    }

    #[test]
    fn known_factors() {
        let a = im(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let f = smith(&a).invariant_factors();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn empty_matrix() {
        let s = smith(&IntMatrix::zeros(0, 3));
        assert_eq!(s.rank, 0);
        assert_eq!(s.v.rows, 3);
    }

    proptest! {
        #[test]
        fn decomposition_holds(
            rows in 0usize..5, cols in 0usize..5,
            seed in proptest::collection::vec(-6i64..7, 25)
        ) {
            let data: Vec<Vec<i64>> =
                (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let a = im(&data, cols);
            let s = smith(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(rows));
            prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(cols));
            for i in 0..rows {
                for j in 0..cols {
                    if i != j || i >= s.rank {
                        prop_assert!(s.d.data[i][j].is_zero());
                    }
                }
            }
            for i in 0..s.rank {
                prop_assert!(s.d.data[i][i].is_positive());
                if i + 1 < s.rank {
                    prop_assert!(s.d.data[i + 1][i + 1].is_multiple_of(&s.d.data[i][i]));
                }
            }
        }
    }
}
