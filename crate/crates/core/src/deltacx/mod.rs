//! δ-decorated cochain complexes for a single chamber.

mod cohomology;

pub use cohomology::{CohomologyPackage, DegreeBlock, EulerData, Towers};

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{fmt_scalar, Coefficients, Matrix, Scalar};

pub type Degree = Rational64;

pub fn fmt_degree(q: &Degree) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: Degree,
}

impl Generator {
    pub fn new(label: impl Into<String>, degree: Degree) -> Self {
        Generator { label: label.into(), degree }
    }
}

/// Chain data of one chamber: `d` has degree +1, `v` degree +2, `delta` is a
/// functional supported in degree `2m-2` and `delta_prime` a vector in degree `2m+1`.
///
/// Matrices act on column vectors: `d[i][j]` is the coefficient of generator `i`
/// in `d(generator j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    pub coeff: Coefficients,
    pub chamber: Degree,
    pub generators: Vec<Generator>,
    pub d: Matrix,
    pub v: Matrix,
    pub delta: Vec<Scalar>,
    pub delta_prime: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: Vec<String>,
}

impl Check {
    pub fn new(name: &str, detail: Vec<String>) -> Self {
        Check { name: name.to_string(), ok: detail.is_empty(), detail }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::Validation(self.to_string()))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.checks {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{:<28} {}", c.name, if c.ok { "OK" } else { "FAIL" })?;
            for d in c.detail.iter().take(8) {
                write!(f, "\n    {d}")?;
            }
            if c.detail.len() > 8 {
                write!(f, "\n    ... {} more", c.detail.len() - 8)?;
            }
        }
        Ok(())
    }
}

/// Nonzero entries of a matrix as `(row label, col label, value)` strings.
fn offending(m: &Matrix, rows: &[Generator], cols: &[Generator]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let x = m.get(i, j);
            if !x.is_zero() {
                let r = rows.get(i).map_or("1", |g| g.label.as_str());
                let c = cols.get(j).map_or("1", |g| g.label.as_str());
                out.push(format!("[{r}, {c}] = {}", fmt_scalar(x)));
            }
        }
    }
    out
}

fn row_matrix(v: &[Scalar]) -> Matrix {
    Matrix::from_fn(1, v.len(), |_, j| v[j].clone())
}

fn col_matrix(v: &[Scalar]) -> Matrix {
    Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
}

impl DeltaComplex {
    pub fn new(
        coeff: Coefficients,
        chamber: Degree,
        generators: Vec<Generator>,
        d: Matrix,
        v: Matrix,
        delta: Vec<Scalar>,
        delta_prime: Vec<Scalar>,
    ) -> Result<Self> {
        let n = generators.len();
        if d.shape() != (n, n) || v.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "d is {:?}, v is {:?}, expected {n}x{n}",
                d.shape(),
                v.shape()
            )));
        }
        if delta.len() != n || delta_prime.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "delta has length {}, delta_prime {}, expected {n}",
                delta.len(),
                delta_prime.len()
            )));
        }
        let two_m = chamber * 2;
        for g in &generators {
            if !(g.degree - two_m).is_integer() {
                return Err(Error::Grading(format!(
                    "generator {} has degree {} not in 2m + Z for m = {}",
                    g.label,
                    fmt_degree(&g.degree),
                    fmt_degree(&chamber)
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.label.as_str()) {
                return Err(Error::MalformedComplex(format!("duplicate label {}", g.label)));
            }
        }
        let conv = |xs: &[Scalar]| xs.iter().map(|x| coeff.convert(x)).collect::<Result<Vec<_>>>();
        Ok(DeltaComplex {
            d: d.convert(&coeff)?,
            v: v.convert(&coeff)?,
            delta: conv(&delta)?,
            delta_prime: conv(&delta_prime)?,
            coeff,
            chamber,
            generators,
        })
    }

    pub fn empty(coeff: Coefficients, chamber: Degree) -> Self {
        DeltaComplex {
            coeff,
            chamber,
            generators: Vec::new(),
            d: Matrix::zeros(0, 0),
            v: Matrix::zeros(0, 0),
            delta: Vec::new(),
            delta_prime: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Position of a degree relative to `2m`; always an integer.
    pub fn rel(&self, q: Degree) -> i64 {
        let r = q - self.chamber * 2;
        debug_assert!(r.is_integer());
        r.to_integer()
    }

    /// Absolute degree at offset `r` from `2m`.
    pub fn abs_degree(&self, r: i64) -> Degree {
        self.chamber * 2 + Degree::from_integer(r)
    }

    pub fn rels(&self) -> Vec<i64> {
        self.generators.iter().map(|g| self.rel(g.degree)).collect()
    }

    /// Mod-2 index: `(q - 2m) mod 2`.
    pub fn ind2(&self, q: Degree) -> u8 {
        self.rel(q).rem_euclid(2) as u8
    }

    pub fn gens_at(&self, r: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.rel(self.generators[i].degree) == r).collect()
    }

    /// Distinct relative degrees carrying generators, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.rels().into_iter().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn delta_row(&self) -> Matrix {
        row_matrix(&self.delta)
    }

    pub fn delta_prime_col(&self) -> Matrix {
        col_matrix(&self.delta_prime)
    }

    /// Block of a degree-`shift` map from relative degree `r` to `r + shift`.
    pub fn block(&self, m: &Matrix, r: i64, shift: i64) -> Matrix {
        m.submatrix(&self.gens_at(r + shift), &self.gens_at(r))
    }

    pub fn validate(&self) -> ValidationReport {
        let k = &self.coeff;
        let n = self.len();
        let rels = self.rels();
        let gens = &self.generators;
        let mut grading = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.d.get(i, j).is_zero() && rels[i] != rels[j] + 1 {
                    grading.push(format!("d[{}, {}] joins wrong degrees", gens[i].label, gens[j].label));
                }
                if !self.v.get(i, j).is_zero() && rels[i] != rels[j] + 2 {
                    grading.push(format!("v[{}, {}] joins wrong degrees", gens[i].label, gens[j].label));
                }
            }
            if !self.delta[i].is_zero() && rels[i] != -2 {
                grading.push(format!("delta nonzero on {} outside degree 2m-2", gens[i].label));
            }
            if !self.delta_prime[i].is_zero() && rels[i] != 1 {
                grading.push(format!("delta' has component {} outside degree 2m+1", gens[i].label));
            }
        }
        let dd = self.d.mm(&self.d, k);
        let delta = self.delta_row();
        let dprime = self.delta_prime_col();
        let deltad = delta.mm(&self.d, k);
        let ddprime = self.d.mm(&dprime, k);
        let rel = self
            .d
            .mm(&self.v, k)
            .sub(&self.v.mm(&self.d, k), k)
            .and_then(|x| x.add(&dprime.mm(&delta, k), k))
            .expect("square shapes");
        ValidationReport {
            checks: vec![
                Check::new("grading", grading),
                Check::new("d∘d = 0", offending(&dd, gens, gens)),
                Check::new("δ∘d = 0", offending(&deltad, &[], gens)),
                Check::new("d∘δ′ = 0", offending(&ddprime, gens, &[])),
                Check::new("dv − vd + δ′δ = 0", offending(&rel, gens, gens)),
            ],
        }
    }

    /// The dual complex at chamber `-m`: degree `q` goes to `-1-q`.
    pub fn dualize(&self) -> DeltaComplex {
        let k = &self.coeff;
        DeltaComplex {
            coeff: k.clone(),
            chamber: -self.chamber,
            generators: self
                .generators
                .iter()
                .map(|g| Generator::new(g.label.clone(), -Degree::from_integer(1) - g.degree))
                .collect(),
            d: self.d.transpose(),
            v: self.v.transpose().neg(k),
            delta: self.delta_prime.clone(),
            delta_prime: self.delta.clone(),
        }
    }

    /// Same chain data over other coefficients (e.g. reduction mod p).
    pub fn with_coefficients(&self, k: &Coefficients) -> Result<DeltaComplex> {
        DeltaComplex::new(
            k.clone(),
            self.chamber,
            self.generators.clone(),
            self.d.clone(),
            self.v.clone(),
            self.delta.clone(),
            self.delta_prime.clone(),
        )
    }

    pub fn cohomology(&self) -> Result<CohomologyPackage> {
        CohomologyPackage::new(self)
    }

    /// Equal up to reordering of generators (matched by label).
    pub fn same_up_to_relabeling(&self, other: &DeltaComplex) -> bool {
        if self.len() != other.len() || self.chamber != other.chamber || self.coeff != other.coeff {
            return false;
        }
        let mut perm = Vec::with_capacity(self.len());
        for g in &self.generators {
            match other.generators.iter().position(|h| h.label == g.label && h.degree == g.degree) {
                Some(p) => perm.push(p),
                None => return false,
            }
        }
        let n = self.len();
        (0..n).all(|i| {
            self.delta[i] == other.delta[perm[i]]
                && self.delta_prime[i] == other.delta_prime[perm[i]]
                && (0..n).all(|j| {
                    self.d.get(i, j) == other.d.get(perm[i], perm[j])
                        && self.v.get(i, j) == other.v.get(perm[i], perm[j])
                })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn deg(n: i64) -> Degree {
        Degree::from_integer(n)
    }

    pub(crate) fn s3_m1() -> DeltaComplex {
        DeltaComplex::new(
            Coefficients::Rationals,
            deg(1),
            vec![Generator::new("a", deg(0))],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            vec![int(1)],
            vec![int(0)],
        )
        .unwrap()
    }

    #[test]
    fn empty_and_single_generator_pass() {
        assert!(DeltaComplex::empty(Coefficients::Rationals, deg(0)).validate().passed());
        let c = DeltaComplex::new(
            Coefficients::Rationals,
            deg(0),
            vec![Generator::new("a", deg(0))],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            vec![int(0)],
            vec![int(0)],
        )
        .unwrap();
        assert!(c.validate().passed());
        assert!(s3_m1().validate().passed());
    }

    #[test]
    fn broken_v_relation_is_reported() {
        // a at 2m-2 = 0, s at 2m-1 = 1, b at 2m+1 = 3; v(a) = s would need d s = -δ′δ(a)
        let gens = vec![
            Generator::new("a", deg(0)),
            Generator::new("s", deg(2)),
            Generator::new("b", deg(3)),
        ];
        let mut v = Matrix::zeros(3, 3);
        v.set(1, 0, int(1));
        let c = DeltaComplex::new(
            Coefficients::Rationals,
            deg(1),
            gens,
            Matrix::zeros(3, 3),
            v,
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(1)],
        )
        .unwrap();
        let r = c.validate();
        assert!(!r.passed());
        let fails: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(fails, vec!["dv − vd + δ′δ = 0"]);
    }

    #[test]
    fn degree_offsets_are_enforced() {
        let err = DeltaComplex::new(
            Coefficients::Rationals,
            deg(0),
            vec![Generator::new("a", Degree::new(1, 2))],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            vec![int(0)],
            vec![int(0)],
        );
        assert!(matches!(err, Err(Error::Grading(_))));
    }

    #[test]
    fn dual_of_s3_m1() {
        let d = s3_m1().dualize();
        assert_eq!(d.chamber, deg(-1));
        assert_eq!(d.generators[0].degree, deg(-1));
        assert_eq!(d.delta_prime, vec![int(1)]);
        assert!(d.validate().passed());
        assert!(d.dualize().same_up_to_relabeling(&s3_m1()));
    }
}
