//! Cohomology of `C' --a--> C --b--> C''` at the middle term.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::field::{Coefficients, Scalar};
use super::linalg::rank;
use super::matrix::Matrix;
use super::smith::{smith, IntMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSummary {
    Field { dim: usize },
    Integral { free_rank: usize, torsion: Vec<String> },
}

impl GroupSummary {
    pub fn is_zero(&self) -> bool {
        match self {
            GroupSummary::Field { dim } => *dim == 0,
            GroupSummary::Integral { free_rank, torsion } => *free_rank == 0 && torsion.is_empty(),
        }
    }

    /// Dimension over a field, free rank over ℤ.
    pub fn rank(&self) -> usize {
        match self {
            GroupSummary::Field { dim } => *dim,
            GroupSummary::Integral { free_rank, .. } => *free_rank,
        }
    }
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSummary::Field { dim } => write!(f, "{dim}"),
            GroupSummary::Integral { free_rank, torsion } => {
                let mut parts = Vec::new();
                if *free_rank > 0 {
                    parts.push(if *free_rank == 1 { "Z".to_string() } else { format!("Z^{free_rank}") });
                }
                parts.extend(torsion.iter().map(|t| format!("Z/{t}")));
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
        }
    }
}

fn check_pair(a: &Matrix, b: &Matrix, k: &Coefficients) -> Result<()> {
    if a.rows() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "pair: a has {} rows, b has {} columns",
            a.rows(),
            b.cols()
        )));
    }
    if !b.mm(a, k).is_zero() {
        return Err(Error::Inconsistent("pair does not compose to zero".into()));
    }
    Ok(())
}

pub fn cohomology_of_pair(a: &Matrix, b: &Matrix, k: &Coefficients) -> Result<GroupSummary> {
    check_pair(a, b, k)?;
    let n = a.rows();
    let ra = rank(a, k);
    let rb = rank(b, k);
    match k {
        Coefficients::Integers => {
            let torsion = smith(&IntMatrix::from_matrix(a)?)
                .invariant_factors()
                .into_iter()
                .filter(|d| !d.is_one())
                .map(|d| d.to_string())
                .collect();
            Ok(GroupSummary::Integral { free_rank: n - ra - rb, torsion })
        }
        _ => Ok(GroupSummary::Field { dim: n - ra - rb }),
    }
}

/// Explicit integral cohomology: generators and a coordinate map.
#[derive(Clone, Debug)]
pub struct IntegralCohomology {
    /// Columns are cocycles representing the generators.
    pub generators: Matrix,
    /// `Some(d)` for a cyclic summand ℤ/d, `None` for ℤ.
    pub orders: Vec<Option<BigInt>>,
    coord: Matrix,
}

impl IntegralCohomology {
    pub fn new(a: &Matrix, b: &Matrix) -> Result<Self> {
        let z = Coefficients::Integers;
        check_pair(a, b, &z)?;
        let n = a.rows();
        let sb = smith(&IntMatrix::from_matrix(b)?);
        let ker: Vec<usize> = (sb.rank..n).collect();
        let all: Vec<usize> = (0..n).collect();
        let v = sb.v.to_matrix();
        let v_inv = sb.v_inv.to_matrix();
        let kbasis = v.submatrix(&all, &ker);
        let kproj = v_inv.submatrix(&ker, &all);
        let c = kproj.mm(a, &z);
        let sc = smith(&IntMatrix::from_matrix(&c)?);
        let gens_all = kbasis.mm(&sc.u_inv.to_matrix(), &z);
        let coord_all = sc.u.to_matrix().mm(&kproj, &z);
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for i in 0..ker.len() {
            if i < sc.rank {
                let d = sc.d.data[i][i].clone();
                if !d.is_one() {
                    keep.push(i);
                    orders.push(Some(d));
                }
            } else {
                keep.push(i);
                orders.push(None);
            }
        }
        let cols: Vec<usize> = (0..n).collect();
        Ok(IntegralCohomology {
            generators: gens_all.select_columns(&keep),
            orders,
            coord: coord_all.submatrix(&keep, &cols),
        })
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Coordinates of the class of a cocycle, torsion entries reduced mod their order.
    pub fn coordinates(&self, z: &[Scalar]) -> Vec<BigInt> {
        let raw = self.coord.apply(z, &Coefficients::Integers);
        raw.into_iter()
            .zip(&self.orders)
            .map(|(x, o)| {
                let x = x.to_integer();
                match o {
                    Some(d) => x.mod_floor(d),
                    None => x,
                }
            })
            .collect()
    }

    pub fn torsion_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.orders[i].is_some()).collect()
    }

    pub fn torsion_orders(&self) -> Vec<BigInt> {
        self.orders.iter().flatten().cloned().collect()
    }

    pub fn generator(&self, i: usize) -> Vec<Scalar> {
        self.generators.column(i)
    }
}

/// Matrix of the map induced on torsion by a cochain map `f`.
///
/// Column `j` holds the torsion coordinates of `f` applied to the `j`-th
/// torsion generator of `src`.
pub fn induced_on_torsion(
    f: &Matrix,
    src: &IntegralCohomology,
    dst: &IntegralCohomology,
) -> Vec<Vec<BigInt>> {
    let z = Coefficients::Integers;
    let ti = dst.torsion_indices();
    src.torsion_indices()
        .into_iter()
        .map(|j| {
            let image = f.apply(&src.generator(j), &z);
            let c = dst.coordinates(&image);
            ti.iter().map(|&i| c[i].clone()).collect()
        })
        .collect()
}

pub fn to_scalar(x: &BigInt) -> Scalar {
    BigRational::from_integer(x.clone())
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}
