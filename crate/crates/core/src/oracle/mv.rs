use std::collections::BTreeMap;

use serde::Serialize;

use super::cw::{cw_cocycles, CwComplex};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{kernel, rank};
use crate::exactalg::{int, Coefficients, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvDegree {
    pub q: i64,
    pub dim_b_star: usize,
    pub dim_cp_infinity: usize,
    pub dim_cp_n_minus_1: usize,
    pub dim_equivariant: usize,
    /// `H^q_T(V,V₀) → H^q(B*,B₀)` is an isomorphism.
    pub first_iso: bool,
    /// `H^q_T(V,V₀) → H^q(CP^∞)` is an isomorphism.
    pub second_iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvSplice {
    pub n: usize,
    /// `CP^∞` is replaced by `CP^N`, exact below degree `2N`.
    pub truncation: usize,
    pub degrees: Vec<MvDegree>,
}

impl MvSplice {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|d| (d.q, d.dim_equivariant)).collect()
    }

    /// First map iso for `q ≤ 2n-1`, second for `q ≥ 2n`.
    pub fn isomorphism_ranges_hold(&self) -> bool {
        let top = 2 * self.n as i64;
        self.degrees.iter().all(|d| if d.q < top { d.first_iso } else { d.second_iso })
    }
}

fn cohomology_dim(x: &CwComplex, k: &Coefficients, q: i64) -> Result<usize> {
    if q < 0 || q as usize > x.dim() {
        return Ok(0);
    }
    Ok(cw_cocycles(x, k, q)?.0)
}

/// Equivariant cohomology of `(V, V₀)` from the short exact sequence
/// `0 → H_T^q → H^q(B*,B₀) ⊕ H^q(CP^∞) → H^q(CP^{n-1}) → 0`.
///
/// `restriction[q]` is the map `H^q(B*,B₀) → H^q(CP^{n-1})` (zero if absent).
pub fn mv_splice(
    n: usize,
    b_star: &BTreeMap<i64, usize>,
    restriction: &BTreeMap<i64, Matrix>,
    window: (i64, i64),
    k: &Coefficients,
) -> Result<MvSplice> {
    k.require_field()?;
    if n == 0 {
        return Err(Error::InvalidInput("half-dimension n must be positive".into()));
    }
    let top = 2 * n as i64;
    if window.0 > window.1 || window.1 < top || window.0 > top - 1 {
        return Err(Error::InvalidInput(format!(
            "window [{}, {}] must contain {} and {} to certify stabilization",
            window.0,
            window.1,
            top - 1,
            top
        )));
    }
    if let Some((q, _)) = b_star.iter().find(|(q, d)| (**q >= top || **q < 0) && **d > 0) {
        return Err(Error::InvalidInput(format!("H^{q}(B*,B₀) must vanish outside 0..{}", top - 1)));
    }
    let truncation = (window.1.max(0) / 2 + 1) as usize;
    let cp_inf = CwComplex::complex_projective(truncation);
    let cp_n1 = CwComplex::complex_projective(n - 1);
    let mut degrees = Vec::new();
    for q in window.0..=window.1 {
        let db = b_star.get(&q).copied().unwrap_or(0);
        let dp = cohomology_dim(&cp_inf, k, q)?;
        let dc = cohomology_dim(&cp_n1, k, q)?;
        let a = match restriction.get(&q) {
            Some(m) if m.shape() != (dc, db) => {
                return Err(Error::DimensionMismatch(format!("restriction in degree {q} has shape {:?}", m.shape())))
            }
            Some(m) => m.convert(k)?,
            None => Matrix::zeros(dc, db),
        };
        // restriction of cellular cochains to the subcomplex CP^{n-1}
        let b = Matrix::from_fn(dc, dp, |i, j| if i == j { int(1) } else { int(0) });
        let m = a.hstack(&b)?;
        if rank(&m, k) != dc {
            return Err(Error::Inconsistent(format!("a + b is not onto in degree {q}")));
        }
        let ker = kernel(&m, &k.clone())?;
        let dt = ker.cols();
        let top_rows: Vec<usize> = (0..db).collect();
        let bottom_rows: Vec<usize> = (db..db + dp).collect();
        let cols: Vec<usize> = (0..dt).collect();
        let p1 = rank(&ker.submatrix(&top_rows, &cols), k);
        let p2 = rank(&ker.submatrix(&bottom_rows, &cols), k);
        degrees.push(MvDegree {
            q,
            dim_b_star: db,
            dim_cp_infinity: dp,
            dim_cp_n_minus_1: dc,
            dim_equivariant: dt,
            first_iso: p1 == dt && dt == db,
            second_iso: p2 == dt && dt == dp,
        });
    }
    Ok(MvSplice { n, truncation, degrees })
}
