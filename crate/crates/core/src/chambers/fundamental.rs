//! The long exact sequence `H̲F̲ → HF̄ → P* → H̲F̲[1]` on a finite degree window.
//!
//! Both limits are realised by actual chambers far enough out that the chamber
//! maps are isomorphisms throughout the window.

use num_integer::Integer;
use serde::Serialize;

use super::ladder::ChamberLadder;
use super::tail::{equivariant_groups, EquivariantGroups};
use crate::deltacx::{fmt_degree, CohomologyPackage, Degree};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{inverse, rank};
use crate::exactalg::{Coefficients, Matrix};

#[derive(Clone, Debug)]
pub struct SequenceDegree {
    pub q: Degree,
    pub dim_under: usize,
    pub dim_over: usize,
    pub dim_poly: usize,
    /// `J: H̲F̲^q → HF̄^q`.
    pub j: Matrix,
    /// `D: HF̄^q → P^q`.
    pub d: Matrix,
    /// `D′: P^q → H̲F̲^{q+1}`.
    pub d_prime: Matrix,
    pub u_under: Matrix,
    pub u_over: Matrix,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SequenceCheck {
    pub degree: String,
    pub term: &'static str,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct FundamentalSequence {
    pub groups: EquivariantGroups,
    pub chamber_lo: Degree,
    pub chamber_hi: Degree,
    pub degrees: Vec<SequenceDegree>,
    pub failures: Vec<SequenceCheck>,
    /// Lowest degree of the window where `D` is nonzero.
    pub lowest_d: Option<Degree>,
}

impl FundamentalSequence {
    pub fn exact(&self) -> bool {
        self.failures.is_empty()
    }

    /// True when the lowest nonzero degree of `D` is `2h` (or `2h` lies outside the window).
    pub fn h_matches(&self, window: (i64, i64)) -> bool {
        let two_h = self.groups.h * 2;
        if two_h < Degree::from_integer(window.0) || two_h > Degree::from_integer(window.1) {
            return self.lowest_d.is_none_or(|d| d > two_h);
        }
        self.lowest_d == Some(two_h)
    }
}

/// Chamber maps induced on cohomology at absolute degree `q`.
struct Chambers {
    ladder: ChamberLadder,
    packs: Vec<CohomologyPackage>,
}

impl Chambers {
    fn idx(&self, m: Degree) -> usize {
        (m - self.ladder.lo()).to_integer() as usize
    }

    fn pack(&self, m: Degree) -> &CohomologyPackage {
        &self.packs[self.idx(m)]
    }

    fn rel(&self, m: Degree, q: Degree) -> i64 {
        (q - m * 2).to_integer()
    }

    fn dim(&self, m: Degree, q: Degree) -> usize {
        self.pack(m).dim(self.rel(m, q))
    }

    fn induced_j(&self, m1: Degree, m2: Degree, q: Degree) -> Result<Matrix> {
        let (a, b) = (self.pack(m1), self.pack(m2));
        let (ra, rb) = (self.rel(m1, q), self.rel(m2, q));
        let chain = self.ladder.j(m1, m2)?;
        let block = chain.submatrix(&b.complex().gens_at(rb), &a.complex().gens_at(ra));
        let k = a.coeff();
        b.class_of(rb, &block.mm(&a.reps(ra)?, k))
    }

    fn u(&self, m: Degree, q: Degree) -> Result<Matrix> {
        self.pack(m)
            .u(self.rel(m, q))?
            .ok_or_else(|| Error::Inconsistent(format!("u undefined in degree {}", fmt_degree(&q))))
    }
}

pub fn fundamental_sequence(p: &CohomologyPackage, window: (i64, i64)) -> Result<FundamentalSequence> {
    let k: Coefficients = p.coeff().clone();
    k.require_field()?;
    let (a, b) = window;
    if a > b {
        return Err(Error::InvalidInput("empty degree window".into()));
    }
    let groups = equivariant_groups(p)?;
    let m = p.chamber();
    let one = Degree::from_integer(1);
    let two_m = m * 2;
    // degrees of the window in 2m + Z
    let first = two_m + Degree::from_integer((Degree::from_integer(a) - two_m).ceil().to_integer());
    let mut qs = Vec::new();
    let mut q = first;
    while q <= Degree::from_integer(b) {
        qs.push(q);
        q += one;
    }
    let hi = (m + (Degree::from_integer(b + 4) / Degree::from_integer(2) - m).ceil()).max(m);
    let lo = (m - (m - Degree::from_integer(a - 3) / Degree::from_integer(2)).ceil()).min(m);
    let ladder = ChamberLadder::build(p.complex(), lo, hi)?;
    let packs = ladder.cohomologies()?;
    let ch = Chambers { ladder, packs };
    let two = Degree::from_integer(2);

    let even = |q: Degree| (q - two_m).to_integer().is_even();
    let d_at = |q: Degree| -> Result<Matrix> {
        let dim_o = ch.dim(hi, q);
        if !even(q) {
            return Ok(Matrix::zeros(0, dim_o));
        }
        let kk = q / two + one;
        let delta0 = ch.pack(kk).delta0()?;
        let jinv = inverse(&ch.induced_j(kk, hi, q)?, &k)?;
        Ok(delta0.mm(&jinv, &k))
    };
    let dp_at = |q: Degree| -> Result<Matrix> {
        let dim_u = ch.dim(lo, q + one);
        if !even(q) {
            return Ok(Matrix::zeros(dim_u, 0));
        }
        let kk = q / two;
        let dp = ch.pack(kk).delta0_prime()?;
        let jinv = inverse(&ch.induced_j(lo, kk, q + one)?, &k)?;
        Ok(jinv.mm(&dp, &k))
    };

    let mut degrees = Vec::new();
    for &q in &qs {
        degrees.push(SequenceDegree {
            q,
            dim_under: ch.dim(lo, q),
            dim_over: ch.dim(hi, q),
            dim_poly: usize::from(even(q)),
            j: ch.induced_j(lo, hi, q)?,
            d: d_at(q)?,
            d_prime: dp_at(q)?,
            u_under: ch.u(lo, q)?,
            u_over: ch.u(hi, q)?,
        });
    }

    let mut failures = Vec::new();
    let mut fail = |q: Degree, term: &'static str| {
        failures.push(SequenceCheck { degree: fmt_degree(&q), term, ok: false })
    };
    let dp_before = dp_at(first - one)?;
    for (i, s) in degrees.iter().enumerate() {
        let q = s.q;
        let prev_dp = if i == 0 { &dp_before } else { &degrees[i - 1].d_prime };
        // exactness at H̲F̲^q
        if !s.j.mm(prev_dp, &k).is_zero() || rank(prev_dp, &k) + rank(&s.j, &k) != s.dim_under {
            fail(q, "exact at under");
        }
        if !s.d.mm(&s.j, &k).is_zero() || rank(&s.j, &k) + rank(&s.d, &k) != s.dim_over {
            fail(q, "exact at over");
        }
        if !s.d_prime.mm(&s.d, &k).is_zero() || rank(&s.d, &k) + rank(&s.d_prime, &k) != s.dim_poly {
            fail(q, "exact at poly");
        }
        // tail-module and reduced-group cross-checks
        if s.dim_over != groups.over.dim(q) || s.dim_under != groups.under.dim(q) {
            fail(q, "limits match tail modules");
        }
        if rank(&s.j, &k) != groups.hat.dim(q) {
            fail(q, "image of J is the reduced group");
        }
        // u-equivariance
        let jn = ch.induced_j(lo, hi, q + two)?;
        if jn.mm(&s.u_under, &k) != s.u_over.mm(&s.j, &k) {
            fail(q, "J commutes with u");
        }
        if even(q) {
            if d_at(q + two)?.mm(&s.u_over, &k) != s.d {
                fail(q, "D commutes with u");
            }
            if dp_at(q + two)? != ch.u(lo, q + one)?.mm(&s.d_prime, &k) {
                fail(q, "D′ commutes with u");
            }
        }
    }
    let lowest_d = degrees.iter().find(|s| !s.d.is_zero()).map(|s| s.q);
    Ok(FundamentalSequence { groups, chamber_lo: lo, chamber_hi: hi, degrees, failures, lowest_d })
}
