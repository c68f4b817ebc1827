use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use super::{Degree, DeltaComplex};
use crate::error::{Error, Result};
use crate::exactalg::linalg::kernel;
use crate::exactalg::{
    cohomology_of_pair, Coefficients, GroupSummary, IntegralCohomology, Matrix, Subquotient,
};

/// Cohomology in one degree. Degrees are stored relative to `2m`.
#[derive(Clone, Debug)]
pub struct DegreeBlock {
    pub rel: i64,
    pub gens: Vec<usize>,
    pub summary: GroupSummary,
    pub hf: Option<Subquotient>,
    pub reduced: Option<Subquotient>,
    pub integral: Option<IntegralCohomology>,
}

#[derive(Clone, Debug)]
pub struct Towers {
    /// `delta[n]` is the functional δ_n on relative degree `-2-2n`.
    pub delta: Vec<Matrix>,
    /// `delta_prime[n]` is the vector δ′_n in relative degree `1+2n`.
    pub delta_prime: Vec<Matrix>,
}

impl Towers {
    pub fn delta_len(&self) -> usize {
        self.delta.iter().take_while(|m| !m.is_zero()).count()
    }

    pub fn delta_prime_len(&self) -> usize {
        self.delta_prime.iter().take_while(|m| !m.is_zero()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerData {
    pub chi_hf: i64,
    pub chi_reduced: i64,
    /// `χ(HF) - m`.
    pub lambda_tilde: Rational64,
}

/// Cohomology of a validated complex with its induced structure maps.
#[derive(Clone, Debug)]
pub struct CohomologyPackage {
    complex: DeltaComplex,
    blocks: BTreeMap<i64, DegreeBlock>,
}

impl CohomologyPackage {
    pub fn new(c: &DeltaComplex) -> Result<Self> {
        c.validate().into_result()?;
        let k = &c.coeff;
        let field = k.is_field();
        // chain-level δv^j and v^jδ′ as global row/column vectors
        let lo = c.support().first().copied().unwrap_or(0);
        let hi = c.support().last().copied().unwrap_or(0);
        let mut dv = vec![c.delta_row()];
        let mut vd = vec![c.delta_prime_col()];
        while -2 - 2 * (dv.len() as i64) >= lo {
            let next = dv.last().unwrap().mm(&c.v, k);
            dv.push(next);
        }
        while 2 * (vd.len() as i64) < hi {
            let next = c.v.mm(vd.last().unwrap(), k);
            vd.push(next);
        }
        let mut blocks = BTreeMap::new();
        for r in c.support() {
            let gens = c.gens_at(r);
            let a = c.block(&c.d, r - 1, 1);
            let b = c.block(&c.d, r, 1);
            let summary = cohomology_of_pair(&a, &b, k)
                .map_err(|e| Error::MalformedComplex(format!("degree {r}: {e}")))?;
            let (hf, reduced, integral) = if field {
                let z = kernel(&b, k)?;
                let hf = Subquotient::new(&z, &a, k)?;
                let mut top = b.clone();
                if r <= -2 && r % 2 == 0 {
                    let j = ((-2 - r) / 2) as usize;
                    top = top.vstack(&dv[j].select_columns(&gens))?;
                }
                let mut bottom = a.clone();
                if r >= 1 && r % 2 != 0 {
                    let j = ((r - 1) / 2) as usize;
                    let all = [0usize];
                    bottom = bottom.hstack(&vd[j].submatrix(&gens, &all))?;
                }
                let reduced = Subquotient::new(&kernel(&top, k)?, &bottom, k).map_err(|e| {
                    Error::Inconsistent(format!("reduced group in relative degree {r}: {e}"))
                })?;
                (Some(hf), Some(reduced), None)
            } else {
                (None, None, Some(IntegralCohomology::new(&a, &b)?))
            };
            blocks.insert(r, DegreeBlock { rel: r, gens, summary, hf, reduced, integral });
        }
        Ok(CohomologyPackage { complex: c.clone(), blocks })
    }

    pub fn complex(&self) -> &DeltaComplex {
        &self.complex
    }

    pub fn coeff(&self) -> &Coefficients {
        &self.complex.coeff
    }

    pub fn chamber(&self) -> Degree {
        self.complex.chamber
    }

    pub fn block(&self, r: i64) -> Option<&DegreeBlock> {
        self.blocks.get(&r)
    }

    pub fn blocks(&self) -> impl Iterator<Item = &DegreeBlock> {
        self.blocks.values()
    }

    /// Relative degrees with nonzero cohomology.
    pub fn support(&self) -> Vec<i64> {
        self.blocks.values().filter(|b| !b.summary.is_zero()).map(|b| b.rel).collect()
    }

    /// Dimension over a field; free rank over ℤ.
    pub fn dim(&self, r: i64) -> usize {
        self.blocks.get(&r).map_or(0, |b| b.summary.rank())
    }

    pub fn reduced_dim(&self, r: i64) -> usize {
        self.blocks.get(&r).and_then(|b| b.reduced.as_ref()).map_or(0, |s| s.dim())
    }

    pub fn summary(&self, r: i64) -> GroupSummary {
        match self.blocks.get(&r) {
            Some(b) => b.summary.clone(),
            None if self.coeff().is_field() => GroupSummary::Field { dim: 0 },
            None => GroupSummary::Integral { free_rank: 0, torsion: vec![] },
        }
    }

    fn hf(&self, r: i64) -> Option<&Subquotient> {
        self.blocks.get(&r).and_then(|b| b.hf.as_ref())
    }

    fn red(&self, r: i64) -> Option<&Subquotient> {
        self.blocks.get(&r).and_then(|b| b.reduced.as_ref())
    }

    /// Class representatives (columns, in generator coordinates of degree `r`).
    pub fn reps(&self, r: i64) -> Result<Matrix> {
        self.coeff().require_field()?;
        Ok(self
            .hf(r)
            .map_or_else(|| Matrix::zeros(self.complex.gens_at(r).len(), 0), |s| s.reps.clone()))
    }

    pub fn reduced_reps(&self, r: i64) -> Result<Matrix> {
        self.coeff().require_field()?;
        Ok(self
            .red(r)
            .map_or_else(|| Matrix::zeros(self.complex.gens_at(r).len(), 0), |s| s.reps.clone()))
    }

    /// Coordinates of the class of a cocycle of relative degree `r`.
    pub fn class_of(&self, r: i64, z: &Matrix) -> Result<Matrix> {
        self.coeff().require_field()?;
        match self.hf(r) {
            Some(s) => s.coords_matrix(z),
            None => Ok(Matrix::zeros(0, z.cols())),
        }
    }

    pub fn reduced_class_of(&self, r: i64, z: &Matrix) -> Result<Matrix> {
        self.coeff().require_field()?;
        match self.red(r) {
            Some(s) => s.coords_matrix(z),
            None => Ok(Matrix::zeros(0, z.cols())),
        }
    }

    /// Map on cohomology induced by a degree-`shift` chain map block.
    fn induced(
        &self,
        f: &Matrix,
        r: i64,
        shift: i64,
        pick: impl Fn(&Self, i64) -> Option<&Subquotient>,
    ) -> Result<Matrix> {
        let (src, dst) = (pick(self, r), pick(self, r + shift));
        match (src, dst) {
            (Some(s), Some(t)) => s.induced(&self.complex.block(f, r, shift), t),
            _ => Ok(Matrix::zeros(dst.map_or(0, |t| t.dim()), src.map_or(0, |s| s.dim()))),
        }
    }

    /// `u: HF^r -> HF^{r+2}`, undefined in relative degrees -2 and -1.
    pub fn u(&self, r: i64) -> Result<Option<Matrix>> {
        self.coeff().require_field()?;
        if r == -2 || r == -1 {
            return Ok(None);
        }
        self.induced(&self.complex.v, r, 2, Self::hf).map(Some)
    }

    /// `u` on the reduced group, defined in every degree.
    pub fn reduced_u(&self, r: i64) -> Result<Matrix> {
        self.coeff().require_field()?;
        self.induced(&self.complex.v, r, 2, Self::red)
    }

    /// Map induced by an arbitrary chain-level degree-`shift` endomorphism.
    pub fn induced_endo(&self, f: &Matrix, r: i64, shift: i64) -> Result<Matrix> {
        self.coeff().require_field()?;
        self.induced(f, r, shift, Self::hf)
    }

    pub fn delta0(&self) -> Result<Matrix> {
        let reps = self.reps(-2)?;
        let gens = self.complex.gens_at(-2);
        Ok(self.complex.delta_row().select_columns(&gens).mm(&reps, self.coeff()))
    }

    pub fn delta0_prime(&self) -> Result<Matrix> {
        self.coeff().require_field()?;
        let gens = self.complex.gens_at(1);
        let z = self.complex.delta_prime_col().submatrix(&gens, &[0]);
        self.class_of(1, &z)
    }

    pub fn delta_towers(&self, n_max: usize) -> Result<Towers> {
        let mut delta = vec![self.delta0()?];
        let mut delta_prime = vec![self.delta0_prime()?];
        for n in 1..=n_max as i64 {
            let u = self.u(-2 - 2 * n)?.expect("u defined below -2");
            delta.push(delta.last().unwrap().mm(&u, self.coeff()));
            let u = self.u(2 * n - 1)?.expect("u defined above -1");
            delta_prime.push(u.mm(delta_prime.last().unwrap(), self.coeff()));
        }
        Ok(Towers { delta, delta_prime })
    }

    /// Enough tower terms to reach past the support.
    pub fn towers(&self) -> Result<Towers> {
        let s = self.complex.support();
        let span = s.first().map_or(0, |&lo| (-lo).max(0)).max(s.last().map_or(0, |&hi| hi.max(0)));
        self.delta_towers((span / 2 + 1) as usize)
    }

    pub fn euler(&self) -> Result<EulerData> {
        self.coeff().require_field()?;
        let mut chi_hf = 0i64;
        let mut chi_reduced = 0i64;
        for b in self.blocks.values() {
            let sign = if b.rel.rem_euclid(2) == 0 { 1 } else { -1 };
            chi_hf += sign * b.summary.rank() as i64;
            chi_reduced += sign * b.reduced.as_ref().map_or(0, |s| s.dim()) as i64;
        }
        Ok(EulerData {
            chi_hf,
            chi_reduced,
            lambda_tilde: Rational64::from_integer(chi_hf) - self.chamber(),
        })
    }

    /// Signed tower length; cross-checked against `χ(HF) - χ(ĤF)`.
    pub fn zeta(&self) -> Result<i64> {
        let t = self.towers()?;
        let (a, b) = (t.delta_len() as i64, t.delta_prime_len() as i64);
        if a > 0 && b > 0 {
            return Err(Error::Inconsistent("both δ₀ and δ′₀ are nonzero".into()));
        }
        let z = a - b;
        let e = self.euler()?;
        if e.chi_hf - e.chi_reduced != z {
            return Err(Error::Inconsistent(format!(
                "tower length {z} disagrees with Euler characteristic difference {}",
                e.chi_hf - e.chi_reduced
            )));
        }
        Ok(z)
    }

    /// `h = m - ζ`.
    pub fn h(&self) -> Result<Degree> {
        Ok(self.chamber() - Degree::from_integer(self.zeta()?))
    }
}

#[cfg(test)]
mod tests {
    use super::super::Generator;
    use super::*;
    use crate::exactalg::int;

    fn deg(n: i64) -> Degree {
        Degree::from_integer(n)
    }

    fn one(chamber: i64, degree: i64, delta: i64, dprime: i64) -> DeltaComplex {
        DeltaComplex::new(
            Coefficients::Rationals,
            deg(chamber),
            vec![Generator::new("a", deg(degree))],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            vec![int(delta)],
            vec![int(dprime)],
        )
        .unwrap()
    }

    #[test]
    fn torsion_in_degree_one() {
        let mut d = Matrix::zeros(2, 2);
        d.set(1, 0, int(2));
        let c = DeltaComplex::new(
            Coefficients::Integers,
            deg(0),
            vec![Generator::new("a", deg(0)), Generator::new("b", deg(1))],
            d,
            Matrix::zeros(2, 2),
            vec![int(0), int(0)],
            vec![int(0), int(0)],
        )
        .unwrap();
        let p = c.cohomology().unwrap();
        assert!(p.summary(0).is_zero());
        assert_eq!(p.summary(1).to_string(), "Z/2");
        assert!(p.u(0).is_err());
    }

    #[test]
    fn s3_chamber_one() {
        let p = one(1, 0, 1, 0).cohomology().unwrap();
        assert_eq!(p.dim(-2), 1);
        assert!(!p.delta0().unwrap().is_zero());
        let t = p.delta_towers(3).unwrap();
        assert_eq!(t.delta_len(), 1);
        assert_eq!(t.delta_prime_len(), 0);
        assert_eq!(p.reduced_dim(-2), 0);
        assert_eq!(p.zeta().unwrap(), 1);
        assert_eq!(p.h().unwrap(), deg(0));
        let e = p.euler().unwrap();
        assert_eq!((e.chi_hf, e.chi_reduced), (1, 0));
        assert_eq!(e.lambda_tilde, deg(0));
    }

    #[test]
    fn dual_s3_flips_zeta() {
        let c = one(1, 0, 1, 0).dualize();
        let p = c.cohomology().unwrap();
        let t = p.delta_towers(3).unwrap();
        assert_eq!(t.delta_prime_len(), 1);
        assert_eq!(p.zeta().unwrap(), -1);
        assert_eq!(p.h().unwrap(), deg(0));
    }

    #[test]
    fn empty_complex() {
        let p = DeltaComplex::empty(Coefficients::Rationals, deg(2)).cohomology().unwrap();
        assert_eq!(p.zeta().unwrap(), 0);
        assert_eq!(p.h().unwrap(), deg(2));
        assert_eq!(p.euler().unwrap().lambda_tilde, deg(-2));
    }

    #[test]
    fn trivial_towers_leave_reduced_equal() {
        let p = one(0, 0, 0, 0).cohomology().unwrap();
        assert_eq!(p.reduced_dim(0), p.dim(0));
        assert_eq!(p.zeta().unwrap(), 0);
    }

    #[test]
    fn u_undefined_near_reducible() {
        let p = one(1, 0, 1, 0).cohomology().unwrap();
        assert!(p.u(-2).unwrap().is_none());
        assert!(p.u(-1).unwrap().is_none());
        assert!(p.u(0).unwrap().is_some());
    }
}
