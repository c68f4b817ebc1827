//! Chain-level chamber change.
//!
//! Moving from chamber `m` to `m+1` adjoins one generator `θ` in degree `2m`
//! with `dθ = δ′(1)`, sets `v(α) += δ(α)θ`, `δ = θ*` and `δ′(1) = vδ′(1)`; the
//! chamber map is the inclusion. Moving down adjoins `η` in degree `2m-1` with
//! `dα -= δ(α)η`, `v(η) = δ′(1)`, `δ = δv` and `δ′(1) = η`; the chamber map is
//! the projection killing `η`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::deltacx::{fmt_degree, CohomologyPackage, Degree, DeltaComplex, Generator};
use crate::error::{Error, Result};
use crate::exactalg::{int, Matrix, Scalar};

fn fresh_label(c: &DeltaComplex, base: String) -> String {
    let mut label = base;
    while c.generators.iter().any(|g| g.label == label) {
        label.push('\'');
    }
    label
}

/// Chamber `m+1` complex and the inclusion of chain groups.
pub fn up_shift(c: &DeltaComplex) -> (DeltaComplex, Matrix) {
    let k = &c.coeff;
    let n = c.len();
    let theta_deg = c.chamber * 2;
    let label = fresh_label(c, format!("θ+{}", fmt_degree(&theta_deg)));
    let mut gens = c.generators.clone();
    gens.push(Generator::new(label, theta_deg));
    let mut d = Matrix::zeros(n + 1, n + 1);
    let mut v = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, c.d.get(i, j).clone());
            v.set(i, j, c.v.get(i, j).clone());
        }
        d.set(i, n, c.delta_prime[i].clone());
        v.set(n, i, c.delta[i].clone());
    }
    let mut delta = vec![Scalar::zero(); n + 1];
    delta[n] = int(1);
    let mut delta_prime = c.v.apply(&c.delta_prime, k);
    delta_prime.push(Scalar::zero());
    let j = Matrix::from_fn(n + 1, n, |i, j| if i == j { int(1) } else { Scalar::zero() });
    let up = DeltaComplex {
        coeff: k.clone(),
        chamber: c.chamber + Degree::one(),
        generators: gens,
        d,
        v,
        delta,
        delta_prime,
    };
    (up, j)
}

/// Chamber `m-1` complex and the chamber map from it to `c`.
pub fn down_shift(c: &DeltaComplex) -> (DeltaComplex, Matrix) {
    let k = &c.coeff;
    let n = c.len();
    let eta_deg = c.chamber * 2 - Degree::one();
    let label = fresh_label(c, format!("θ-{}", fmt_degree(&eta_deg)));
    let mut gens = c.generators.clone();
    gens.push(Generator::new(label, eta_deg));
    let mut d = Matrix::zeros(n + 1, n + 1);
    let mut v = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            d.set(i, j, c.d.get(i, j).clone());
            v.set(i, j, c.v.get(i, j).clone());
        }
        d.set(n, i, k.neg(&c.delta[i]));
        v.set(i, n, c.delta_prime[i].clone());
    }
    let mut delta = c.v.transpose().apply(&c.delta, k);
    delta.push(Scalar::zero());
    let mut delta_prime = vec![Scalar::zero(); n + 1];
    delta_prime[n] = int(1);
    let j = Matrix::from_fn(n, n + 1, |i, j| if i == j { int(1) } else { Scalar::zero() });
    let down = DeltaComplex {
        coeff: k.clone(),
        chamber: c.chamber - Degree::one(),
        generators: gens,
        d,
        v,
        delta,
        delta_prime,
    };
    (down, j)
}

/// Consecutive chambers `lo, lo+1, …, hi` with chain-level step maps.
#[derive(Clone, Debug)]
pub struct ChamberLadder {
    pub complexes: Vec<DeltaComplex>,
    /// `steps[i]` maps chamber `lo+i` to `lo+i+1`.
    pub steps: Vec<Matrix>,
}

impl ChamberLadder {
    pub fn build(c: &DeltaComplex, lo: Degree, hi: Degree) -> Result<Self> {
        let m = c.chamber;
        for t in [lo, hi] {
            if !(t - m).is_integer() {
                return Err(Error::Grading(format!(
                    "chamber {} is not in {} + Z",
                    fmt_degree(&t),
                    fmt_degree(&m)
                )));
            }
        }
        if lo > m || hi < m {
            return Err(Error::InvalidInput("ladder must contain the base chamber".into()));
        }
        let below = (m - lo).to_integer() as usize;
        let above = (hi - m).to_integer() as usize;
        let mut lower = Vec::with_capacity(below);
        let mut cur = c.clone();
        for _ in 0..below {
            let (dn, j) = down_shift(&cur);
            lower.push((dn.clone(), j));
            cur = dn;
        }
        let mut complexes = Vec::new();
        let mut steps = Vec::new();
        for (cx, j) in lower.into_iter().rev() {
            complexes.push(cx);
            steps.push(j);
        }
        complexes.push(c.clone());
        let mut cur = c.clone();
        for _ in 0..above {
            let (up, j) = up_shift(&cur);
            steps.push(j);
            complexes.push(up.clone());
            cur = up;
        }
        Ok(ChamberLadder { complexes, steps })
    }

    pub fn lo(&self) -> Degree {
        self.complexes[0].chamber
    }

    pub fn hi(&self) -> Degree {
        self.complexes.last().unwrap().chamber
    }

    fn index(&self, m: Degree) -> Result<usize> {
        let i = m - self.lo();
        if !i.is_integer() || m < self.lo() || m > self.hi() {
            return Err(Error::InvalidInput(format!("chamber {} outside ladder", fmt_degree(&m))));
        }
        Ok(i.to_integer() as usize)
    }

    pub fn chamber(&self, m: Degree) -> Result<&DeltaComplex> {
        Ok(&self.complexes[self.index(m)?])
    }

    /// Chain-level chamber map from `m1` to `m2 >= m1`.
    pub fn j(&self, m1: Degree, m2: Degree) -> Result<Matrix> {
        let (a, b) = (self.index(m1)?, self.index(m2)?);
        if a > b {
            return Err(Error::InvalidInput("chamber maps go upward: m1 > m2".into()));
        }
        let k = &self.complexes[0].coeff;
        let mut out = Matrix::identity(self.complexes[a].len());
        for s in &self.steps[a..b] {
            out = s.mm(&out, k);
        }
        Ok(out)
    }

    /// Cohomology of every chamber, computed in parallel.
    pub fn cohomologies(&self) -> Result<Vec<CohomologyPackage>> {
        self.complexes.par_iter().map(|c| c.cohomology()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Coefficients;

    fn deg(n: i64) -> Degree {
        Degree::from_integer(n)
    }

    #[test]
    fn shifts_preserve_relations() {
        let e = DeltaComplex::empty(Coefficients::Rationals, deg(0));
        let mut c = e.clone();
        for _ in 0..3 {
            c = up_shift(&c).0;
            assert!(c.validate().passed());
        }
        let mut c = e;
        for _ in 0..3 {
            c = down_shift(&c).0;
            assert!(c.validate().passed());
        }
        assert_eq!(c.chamber, deg(-3));
        let degrees: Vec<Degree> = c.generators.iter().map(|g| g.degree).collect();
        assert_eq!(degrees, vec![deg(-1), deg(-3), deg(-5)]);
    }

    #[test]
    fn steps_are_chain_maps() {
        let e = DeltaComplex::empty(Coefficients::Rationals, deg(0));
        let l = ChamberLadder::build(&e, deg(-3), deg(3)).unwrap();
        let k = Coefficients::Rationals;
        for (i, s) in l.steps.iter().enumerate() {
            let (a, b) = (&l.complexes[i], &l.complexes[i + 1]);
            assert_eq!(b.d.mm(s, &k), s.mm(&a.d, &k));
        }
        assert_eq!(l.j(deg(-3), deg(3)).unwrap().shape(), (3, 3));
        assert!(l.j(deg(1), deg(0)).is_err());
    }
}
