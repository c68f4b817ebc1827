use super::ladder::ChamberLadder;
use crate::deltacx::{fmt_degree, CohomologyPackage, Degree};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{column_basis, kernel, rank};
use crate::exactalg::Matrix;

fn check_offset(p: &CohomologyPackage, t: Degree) -> Result<()> {
    if (t - p.chamber()).is_integer() {
        Ok(())
    } else {
        Err(Error::Grading(format!(
            "chamber {} is not in {} + Z",
            fmt_degree(&t),
            fmt_degree(&p.chamber())
        )))
    }
}

/// Cohomology in another chamber of the same manifold.
pub fn derive_chamber(p: &CohomologyPackage, m_target: Degree) -> Result<CohomologyPackage> {
    p.coeff().require_field()?;
    check_offset(p, m_target)?;
    let m = p.chamber();
    let ladder = ChamberLadder::build(p.complex(), m.min(m_target), m.max(m_target))?;
    ladder.chamber(m_target)?.cohomology()
}

#[derive(Clone, Debug)]
pub struct JMapDegree {
    pub q: Degree,
    pub dim_source: usize,
    pub dim_target: usize,
    /// Columns span the kernel, in the source cohomology basis.
    pub kernel: Matrix,
    /// Columns span the image, in the target cohomology basis.
    pub image: Matrix,
    /// Kernel equals the span of `δ′_j`, `j < m2 - m1`, in chamber `m1`.
    pub kernel_matches_towers: bool,
    /// Image equals the common kernel of `δ_j`, `j < m2 - m1`, in chamber `m2`.
    pub image_matches_towers: bool,
}

#[derive(Clone, Debug)]
pub struct JMap {
    pub m1: Degree,
    pub m2: Degree,
    pub degrees: Vec<JMapDegree>,
}

impl JMap {
    pub fn consistent(&self) -> bool {
        self.degrees.iter().all(|d| d.kernel_matches_towers && d.image_matches_towers)
    }
}

fn same_span(a: &Matrix, b: &Matrix, k: &crate::exactalg::Coefficients) -> bool {
    let ra = rank(a, k);
    ra == rank(b, k) && ra == rank(&a.hstack(b).expect("same ambient"), k)
}

/// The chamber map `HF(m1) → HF(m2)` degree by degree.
pub fn j_map(p: &CohomologyPackage, m1: Degree, m2: Degree) -> Result<JMap> {
    let k = p.coeff().clone();
    k.require_field()?;
    check_offset(p, m1)?;
    check_offset(p, m2)?;
    if m1 > m2 {
        return Err(Error::InvalidInput("J is only defined for m1 <= m2".into()));
    }
    let m = p.chamber();
    let ladder = ChamberLadder::build(p.complex(), m.min(m1), m.max(m2))?;
    let (a, b) = (ladder.chamber(m1)?.cohomology()?, ladder.chamber(m2)?.cohomology()?);
    let chain = ladder.j(m1, m2)?;
    let ell = (m2 - m1).to_integer();
    let (ta, tb) = (a.towers()?, b.towers()?);
    let mut qs: Vec<Degree> = a
        .complex()
        .support()
        .into_iter()
        .map(|r| a.complex().abs_degree(r))
        .chain(b.complex().support().into_iter().map(|r| b.complex().abs_degree(r)))
        .collect();
    qs.sort();
    qs.dedup();
    let mut degrees = Vec::new();
    for q in qs {
        let (ra, rb) = (a.complex().rel(q), b.complex().rel(q));
        let block = chain.submatrix(&b.complex().gens_at(rb), &a.complex().gens_at(ra));
        let jq = b.class_of(rb, &block.mm(&a.reps(ra)?, &k))?;
        let ker = kernel(&jq, &k)?;
        let img = column_basis(&jq, &k);
        let (ds, dt) = (a.dim(ra), b.dim(rb));
        let expected_ker = if ra >= 1 && ra % 2 == 1 && (ra - 1) / 2 < ell {
            ta.delta_prime.get(((ra - 1) / 2) as usize).cloned().unwrap_or_else(|| Matrix::zeros(ds, 1))
        } else {
            Matrix::zeros(ds, 0)
        };
        let expected_img = if rb <= -2 && rb % 2 == 0 && (-2 - rb) / 2 < ell {
            let row = tb.delta.get(((-2 - rb) / 2) as usize).cloned().unwrap_or_else(|| Matrix::zeros(1, dt));
            kernel(&row, &k)?
        } else {
            Matrix::identity(dt)
        };
        degrees.push(JMapDegree {
            q,
            dim_source: ds,
            dim_target: dt,
            kernel_matches_towers: same_span(&ker, &expected_ker, &k),
            image_matches_towers: same_span(&img, &expected_img, &k),
            kernel: ker,
            image: img,
        });
    }
    Ok(JMap { m1, m2, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deltacx::{DeltaComplex, Generator};
    use crate::exactalg::{int, Coefficients};

    fn deg(n: i64) -> Degree {
        Degree::from_integer(n)
    }

    fn empty() -> CohomologyPackage {
        DeltaComplex::empty(Coefficients::Rationals, deg(0)).cohomology().unwrap()
    }

    #[test]
    fn s3_structure_pattern() {
        let p = empty();
        let down = derive_chamber(&p, deg(-2)).unwrap();
        assert_eq!((down.dim(-3 + 4), down.dim(-1 + 4)), (1, 1));
        assert_eq!(down.support().len(), 2);
        let up = derive_chamber(&p, deg(3)).unwrap();
        let abs: Vec<i64> = up.support().iter().map(|r| r + 6).collect();
        assert_eq!(abs, vec![0, 2, 4]);
        assert_eq!(derive_chamber(&p, deg(0)).unwrap().support(), Vec::<i64>::new());
        assert!(derive_chamber(&p, Degree::new(1, 2)).is_err());
    }

    #[test]
    fn s3_chamber_one_j_kills_degree_zero() {
        let c = DeltaComplex::new(
            Coefficients::Rationals,
            deg(1),
            vec![Generator::new("a", deg(0))],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            vec![int(1)],
            vec![int(0)],
        )
        .unwrap();
        let j = j_map(&c.cohomology().unwrap(), deg(1), deg(2)).unwrap();
        assert!(j.consistent());
        let d0 = j.degrees.iter().find(|d| d.q == deg(0)).unwrap();
        assert_eq!(d0.kernel.cols(), 0);
        assert_eq!(d0.image.cols(), 1);
        let same = j_map(&c.cohomology().unwrap(), deg(1), deg(1)).unwrap();
        assert!(same.degrees.iter().all(|d| d.kernel.cols() == 0 && d.image.cols() == d.dim_target));
        assert!(j_map(&c.cohomology().unwrap(), deg(2), deg(1)).is_err());
    }
}
