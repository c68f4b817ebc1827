use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::linalg::{kernel, rank};
use crate::exactalg::{cohomology_of_pair, Coefficients, GroupSummary, Matrix};

/// Finite CW complex given by its cellular chain complex.
///
/// `boundary[k]` is `∂_{k+1}: C_{k+1} → C_k`, a `cells[k] × cells[k+1]` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwComplex {
    pub cells: Vec<usize>,
    pub boundary: Vec<Matrix>,
}

impl CwComplex {
    pub fn new(cells: Vec<usize>, boundary: Vec<Matrix>) -> Result<Self> {
        let top = cells.len().saturating_sub(1);
        if boundary.len() != top {
            return Err(Error::DimensionMismatch(format!(
                "{} cell dimensions need {top} boundary matrices, got {}",
                cells.len(),
                boundary.len()
            )));
        }
        for (k, b) in boundary.iter().enumerate() {
            if b.shape() != (cells[k], cells[k + 1]) {
                return Err(Error::DimensionMismatch(format!(
                    "∂_{} is {:?}, expected {:?}",
                    k + 1,
                    b.shape(),
                    (cells[k], cells[k + 1])
                )));
            }
            if !b.is_integral() {
                return Err(Error::InvalidInput("cellular boundaries must be integral".into()));
            }
        }
        let z = Coefficients::Integers;
        for k in 1..boundary.len() {
            if !boundary[k - 1].mm(&boundary[k], &z).is_zero() {
                return Err(Error::Inconsistent(format!("∂_{} ∘ ∂_{} ≠ 0", k, k + 1)));
            }
        }
        Ok(CwComplex { cells, boundary })
    }

    /// `CP^N` with one cell in each even dimension `0..2N`.
    pub fn complex_projective(n: usize) -> Self {
        let cells: Vec<usize> = (0..=2 * n).map(|k| usize::from(k % 2 == 0)).collect();
        let boundary = (0..2 * n).map(|k| Matrix::zeros(cells[k], cells[k + 1])).collect();
        CwComplex { cells, boundary }
    }

    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    /// Coboundary `δ^k: C^k → C^{k+1}`; empty at the ends.
    pub fn coboundary(&self, k: i64) -> Matrix {
        let n = |j: i64| if j < 0 { 0 } else { self.cells.get(j as usize).copied().unwrap_or(0) };
        if k < 0 || k as usize >= self.boundary.len() {
            return Matrix::zeros(n(k + 1), n(k));
        }
        self.boundary[k as usize].transpose()
    }
}

/// `H^q` of the cellular cochain complex, for every `q` with cells.
pub fn cw_cohomology(x: &CwComplex, k: &Coefficients) -> Result<BTreeMap<i64, GroupSummary>> {
    let mut out = BTreeMap::new();
    for q in 0..x.cells.len() as i64 {
        let a = x.coboundary(q - 1).convert(k)?;
        let b = x.coboundary(q).convert(k)?;
        out.insert(q, cohomology_of_pair(&a, &b, k)?);
    }
    Ok(out)
}

/// Cohomology dimensions over a field together with cocycle bases.
pub(crate) fn cw_cocycles(x: &CwComplex, k: &Coefficients, q: i64) -> Result<(usize, Matrix)> {
    k.require_field()?;
    let a = x.coboundary(q - 1).convert(k)?;
    let b = x.coboundary(q).convert(k)?;
    let z = kernel(&b, k)?;
    Ok((z.cols() - rank(&a, k), z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn basic_spaces() {
        let q = Coefficients::Rationals;
        let cp2 = cw_cohomology(&CwComplex::complex_projective(2), &q).unwrap();
        let dims: Vec<usize> = cp2.values().map(|g| g.rank()).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
        let s1 = CwComplex::new(vec![1, 1], vec![Matrix::zeros(1, 1)]).unwrap();
        let dims: Vec<usize> = cw_cohomology(&s1, &q).unwrap().values().map(|g| g.rank()).collect();
        assert_eq!(dims, vec![1, 1]);
    }

    #[test]
    fn projective_plane_over_integers() {
        let mut d2 = Matrix::zeros(1, 1);
        d2.set(0, 0, int(2));
        let rp2 = CwComplex::new(vec![1, 1, 1], vec![Matrix::zeros(1, 1), d2]).unwrap();
        let h = cw_cohomology(&rp2, &Coefficients::Integers).unwrap();
        assert_eq!(h[&0].to_string(), "Z");
        assert_eq!(h[&1].to_string(), "0");
        assert_eq!(h[&2].to_string(), "Z/2");
    }

    #[test]
    fn rejects_nonzero_square() {
        let one = Matrix::from_i64_rows(&[vec![1]], 1).unwrap();
        assert!(CwComplex::new(vec![1, 1, 1], vec![one.clone(), one]).is_err());
    }
}
