//! Chamber maps on the torsion of integral cohomology.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ladder::ChamberLadder;
use crate::deltacx::{fmt_degree, Degree, DeltaComplex};
use crate::error::{Error, Result};
use crate::exactalg::cohom::induced_on_torsion;
use crate::exactalg::smith::smith;
use crate::exactalg::{Coefficients, IntMatrix};

/// Injectivity and surjectivity of `⊕ Z/a_j → ⊕ Z/b_i` given by `cols[j]`.
pub fn torsion_map_properties(cols: &[Vec<BigInt>], a: &[BigInt], b: &[BigInt]) -> (bool, bool) {
    let r = b.len();
    let s = a.len();
    let mut m = IntMatrix::zeros(r, s + r);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..r {
            m.data[i][j] = col[i].clone();
        }
    }
    for i in 0..r {
        m.data[i][s + i] = b[i].clone();
    }
    let f = smith(&m).invariant_factors();
    let surjective = f.len() == r && f.iter().all(|x| x.is_one());
    let prod = |xs: &[BigInt]| xs.iter().fold(BigInt::one(), |acc, x| acc * x);
    let image = prod(b) / prod(&f);
    let injective = image == prod(a);
    (injective, surjective)
}

#[derive(Clone, Debug)]
pub struct TorsionDegree {
    pub q: Degree,
    pub source_orders: Vec<BigInt>,
    pub target_orders: Vec<BigInt>,
    /// Column `j`: torsion coordinates of the image of source generator `j`.
    pub map: Vec<Vec<BigInt>>,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub m1: Degree,
    pub m2: Degree,
    /// `h` computed over ℚ.
    pub h0: Degree,
    pub degrees: Vec<TorsionDegree>,
}

impl TorsionReport {
    pub fn injective(&self) -> bool {
        self.degrees.iter().all(|d| d.injective)
    }

    pub fn surjective(&self) -> bool {
        self.degrees.iter().all(|d| d.surjective)
    }

    pub fn predicts_injective(&self) -> bool {
        self.m2 <= self.h0
    }

    pub fn predicts_surjective(&self) -> bool {
        self.h0 <= self.m1
    }

    /// Observed behavior agrees with every applicable prediction.
    pub fn consistent(&self) -> bool {
        (!self.predicts_injective() || self.injective())
            && (!self.predicts_surjective() || self.surjective())
    }
}

pub fn torsion_transport(c: &DeltaComplex, m1: Degree, m2: Degree) -> Result<TorsionReport> {
    if c.coeff != Coefficients::Integers {
        return Err(Error::NotIntegers);
    }
    for t in [m1, m2] {
        if !(t - c.chamber).is_integer() {
            return Err(Error::Grading(format!(
                "chamber {} is not in {} + Z",
                fmt_degree(&t),
                fmt_degree(&c.chamber)
            )));
        }
    }
    if m1 > m2 {
        return Err(Error::InvalidInput("torsion transport needs m1 <= m2".into()));
    }
    let h0 = c.with_coefficients(&Coefficients::Rationals)?.cohomology()?.h()?;
    let ladder = ChamberLadder::build(c, c.chamber.min(m1), c.chamber.max(m2))?;
    let (a, b) = (ladder.chamber(m1)?.cohomology()?, ladder.chamber(m2)?.cohomology()?);
    let chain = ladder.j(m1, m2)?;
    let mut qs: Vec<Degree> = a
        .blocks()
        .map(|x| a.complex().abs_degree(x.rel))
        .chain(b.blocks().map(|x| b.complex().abs_degree(x.rel)))
        .collect();
    qs.sort();
    qs.dedup();
    let mut degrees = Vec::new();
    for q in qs {
        let (ra, rb) = (a.complex().rel(q), b.complex().rel(q));
        let src = a.block(ra).and_then(|x| x.integral.as_ref());
        let dst = b.block(rb).and_then(|x| x.integral.as_ref());
        let source_orders = src.map_or_else(Vec::new, |s| s.torsion_orders());
        let target_orders = dst.map_or_else(Vec::new, |s| s.torsion_orders());
        if source_orders.is_empty() && target_orders.is_empty() {
            continue;
        }
        let map = match (src, dst) {
            (Some(s), Some(t)) => {
                let block = chain.submatrix(&b.complex().gens_at(rb), &a.complex().gens_at(ra));
                induced_on_torsion(&block, s, t)
            }
            _ => vec![vec![BigInt::zero(); target_orders.len()]; source_orders.len()],
        };
        let (injective, surjective) = torsion_map_properties(&map, &source_orders, &target_orders);
        degrees.push(TorsionDegree { q, source_orders, target_orders, map, injective, surjective });
    }
    Ok(TorsionReport { m1, m2, h0, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deltacx::Generator;
    use crate::exactalg::{int, Matrix};

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn torsion_map_cases() {
        // Z/2 -> Z/4, 1 -> 2: injective, not surjective
        assert_eq!(torsion_map_properties(&[vec![b(2)]], &[b(2)], &[b(4)]), (true, false));
        // Z/4 -> Z/2, 1 -> 1: surjective, not injective
        assert_eq!(torsion_map_properties(&[vec![b(1)]], &[b(4)], &[b(2)]), (false, true));
        // Z/3 -> Z/3 identity
        assert_eq!(torsion_map_properties(&[vec![b(1)]], &[b(3)], &[b(3)]), (true, true));
        // 0 -> 0
        assert_eq!(torsion_map_properties(&[], &[], &[]), (true, true));
        // Z/2 -> 0
        assert_eq!(torsion_map_properties(&[vec![]], &[b(2)], &[]), (false, true));
    }

    #[test]
    fn two_torsion_survives_chamber_shifts() {
        let mut d = Matrix::zeros(2, 2);
        d.set(1, 0, int(2));
        let deg = Degree::from_integer;
        let c = DeltaComplex::new(
            Coefficients::Integers,
            deg(0),
            vec![Generator::new("a", deg(4)), Generator::new("b", deg(5))],
            d,
            Matrix::zeros(2, 2),
            vec![int(0), int(0)],
            vec![int(0), int(0)],
        )
        .unwrap();
        for (m1, m2) in [(-2, 0), (0, 2), (-1, 3)] {
            let r = torsion_transport(&c, deg(m1), deg(m2)).unwrap();
            assert!(r.injective() && r.surjective(), "{m1} -> {m2}");
        }
    }
}
