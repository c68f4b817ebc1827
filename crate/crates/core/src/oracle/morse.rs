use std::collections::BTreeMap;

use serde::Serialize;

use super::cw::{cw_cohomology, CwComplex};
use super::mv::{mv_splice, MvSplice};
use crate::chambers::equivariant_groups;
use crate::deltacx::{Degree, DeltaComplex, Generator};
use crate::error::{Error, Result};
use crate::exactalg::{int, Coefficients, Matrix, Scalar};

/// Circle-equivariant Morse data on `V` with a single fixed point `p` of index `2n`.
///
/// `differential[i][j]` counts flows of the quotient gradient from critical
/// point `j` to critical point `i` (`ind i = ind j + 1`): the cohomological
/// Morse differential. `flows_to_p[j]` counts flows between point `j` and the
/// fixed point, which only make sense in index `2n-2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseModel {
    pub n: u32,
    pub critical_points: Vec<(String, u32)>,
    pub differential: Matrix,
    pub flows_to_p: Vec<i64>,
    pub flows_from_p: Vec<i64>,
    pub v: Option<Matrix>,
}

impl MorseModel {
    pub fn ball(n: u32) -> Self {
        MorseModel {
            n,
            critical_points: Vec::new(),
            differential: Matrix::zeros(0, 0),
            flows_to_p: Vec::new(),
            flows_from_p: Vec::new(),
            v: None,
        }
    }

    fn check(&self) -> Result<()> {
        let k = self.critical_points.len();
        let top = 2 * self.n;
        if self.n == 0 {
            return Err(Error::InvalidInput("half-dimension n must be positive".into()));
        }
        if let Some((l, i)) = self.critical_points.iter().find(|(_, i)| *i >= top) {
            return Err(Error::InvalidInput(format!("critical point {l} has index {i} outside [0, {}]", top - 1)));
        }
        if self.differential.shape() != (k, k) || self.flows_to_p.len() != k || self.flows_from_p.len() != k {
            return Err(Error::DimensionMismatch("Morse data sizes disagree with the critical points".into()));
        }
        Ok(())
    }

    /// Cellular model of `(B*, B₀)`: one cell per critical point.
    pub fn cw_model(&self) -> Result<CwComplex> {
        self.check()?;
        let top = self.critical_points.iter().map(|c| c.1 as usize).max().map_or(0, |t| t + 1);
        let by_index: Vec<Vec<usize>> = (0..top)
            .map(|q| (0..self.critical_points.len()).filter(|&i| self.critical_points[i].1 as usize == q).collect())
            .collect();
        let cells = by_index.iter().map(|v| v.len()).collect();
        let boundary = (0..top.saturating_sub(1))
            .map(|q| self.differential.submatrix(&by_index[q + 1], &by_index[q]).transpose())
            .collect();
        CwComplex::new(cells, boundary)
    }
}

/// The model as a δ-complex in chamber `m = n`, generator degree = Morse index.
pub fn morse_to_delta(m: &MorseModel, k: &Coefficients) -> Result<DeltaComplex> {
    m.check()?;
    let n = m.critical_points.len();
    let gens = m
        .critical_points
        .iter()
        .map(|(l, i)| Generator::new(l.clone(), Degree::from_integer(i64::from(*i))))
        .collect();
    let v = m.v.clone().unwrap_or_else(|| Matrix::zeros(n, n));
    let to_s = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<Scalar>>();
    let c = DeltaComplex::new(
        k.clone(),
        Degree::from_integer(i64::from(m.n)),
        gens,
        m.differential.clone(),
        v,
        to_s(&m.flows_to_p),
        to_s(&m.flows_from_p),
    )?;
    c.validate().into_result()?;
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
pub struct MorseCheck {
    pub window: (i64, i64),
    /// `dim HF̄^q` from the δ-complex pipeline.
    pub delta_side: BTreeMap<i64, usize>,
    /// `dim H^q_T(V, V₀)` from the cellular splice.
    pub splice: MvSplice,
    pub agree: bool,
}

/// Compares the upper equivariant limit of the δ-complex with the splice of the
/// cellular cohomology of `(B*, B₀)`.
pub fn morse_cross_check(m: &MorseModel, k: &Coefficients, window: (i64, i64)) -> Result<MorseCheck> {
    let c = morse_to_delta(m, k)?;
    let p = c.cohomology()?;
    let g = equivariant_groups(&p)?;
    let hb: BTreeMap<i64, usize> = cw_cohomology(&m.cw_model()?, k)?.into_iter().map(|(q, s)| (q, s.rank())).collect();
    let splice = mv_splice(m.n as usize, &hb, &BTreeMap::new(), window, k)?;
    let delta_side: BTreeMap<i64, usize> =
        (window.0..=window.1).map(|q| (q, g.over.dim(Degree::from_integer(q)))).collect();
    let agree = delta_side == splice.dims();
    Ok(MorseCheck { window, delta_side, splice, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_model_agrees() {
        let r = morse_cross_check(&MorseModel::ball(1), &Coefficients::Rationals, (-2, 6)).unwrap();
        assert!(r.agree, "{r:?}");
    }

    #[test]
    fn isolated_minimum() {
        let m = MorseModel {
            n: 2,
            critical_points: vec![("a".into(), 0)],
            differential: Matrix::zeros(1, 1),
            flows_to_p: vec![0],
            flows_from_p: vec![0],
            v: None,
        };
        let c = morse_to_delta(&m, &Coefficients::Rationals).unwrap();
        let p = c.cohomology().unwrap();
        assert_eq!(p.dim(c.rel(Degree::from_integer(0))), 1);
        assert!(p.delta0().unwrap().is_zero());
        assert!(morse_cross_check(&m, &Coefficients::Rationals, (0, 8)).unwrap().agree);
    }

    #[test]
    fn flow_into_fixed_point() {
        let m = MorseModel {
            n: 1,
            critical_points: vec![("a".into(), 0)],
            differential: Matrix::zeros(1, 1),
            flows_to_p: vec![1],
            flows_from_p: vec![0],
            v: None,
        };
        let c = morse_to_delta(&m, &Coefficients::Rationals).unwrap();
        let p = c.cohomology().unwrap();
        assert_eq!(p.reduced_dim(-2), 0);
        assert_eq!(p.zeta().unwrap(), 1);
        assert!(morse_cross_check(&m, &Coefficients::Rationals, (0, 6)).unwrap().agree);
    }

    #[test]
    fn index_out_of_range() {
        let mut m = MorseModel::ball(1);
        m.critical_points.push(("x".into(), 2));
        m.differential = Matrix::zeros(1, 1);
        m.flows_to_p = vec![0];
        m.flows_from_p = vec![0];
        assert!(morse_to_delta(&m, &Coefficients::Rationals).is_err());
    }
}
