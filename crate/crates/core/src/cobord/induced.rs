use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{induced_block, CobordismData, Topology};
use crate::chambers::{equivariant_groups, TailModule};
use crate::deltacx::{fmt_degree, Check, CohomologyPackage, Degree};
use crate::error::{Error, Result};
use crate::exactalg::linalg::kernel;
use crate::exactalg::{int, Matrix};

/// Maps induced on `HF`, `ĤF` and both equivariant limits, keyed by source degree.
#[derive(Clone, Debug)]
pub struct InducedMaps {
    pub shift: Rational64,
    pub hf: BTreeMap<Degree, Matrix>,
    pub reduced: BTreeMap<Degree, Matrix>,
    pub over: BTreeMap<Degree, Matrix>,
    pub under: BTreeMap<Degree, Matrix>,
    /// Whether `P(W)` is the shift `x^m ↦ x^{m-d/2}` (otherwise zero).
    pub p_nonzero: bool,
    pub source_over: TailModule,
    pub target_over: TailModule,
    pub source_under: TailModule,
    pub target_under: TailModule,
    pub checks: Vec<Check>,
}

impl InducedMaps {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn tail_map(src: &TailModule, dst: &TailModule, hat: Option<&Matrix>, q: Degree, shift: Rational64, pw: bool) -> Matrix {
    let t = q - shift;
    let fin = hat.cloned().unwrap_or_else(|| Matrix::zeros(dst.finite_dim(t), src.finite_dim(q)));
    let rows = dst.towers.iter().filter(|x| x.contains(t)).count();
    let cols = src.towers.iter().filter(|x| x.contains(q)).count();
    let mut tow = Matrix::zeros(rows, cols);
    if pw && rows == 1 && cols == 1 {
        tow.set(0, 0, int(1));
    }
    fin.direct_sum(&tow)
}

fn tower_row(m: &TailModule, q: Degree) -> Matrix {
    let fin = m.finite_dim(q);
    let has = m.towers.iter().any(|t| t.contains(q));
    Matrix::from_fn(1, fin + usize::from(has), |_, j| if j == fin { int(1) } else { int(0) })
}

fn tower_col(m: &TailModule, q: Degree) -> Matrix {
    tower_row(m, q).transpose()
}

pub fn induced_maps(w: &CobordismData) -> Result<InducedMaps> {
    let k = w.coeff().clone();
    k.require_field()?;
    let top = &w.topology;
    if top.bplus == 0 && top.b1 > 0 {
        return Err(Error::Unsupported("P(W) for b⁺ = 0 and b₁ > 0".into()));
    }
    let pw = top.bplus == 0;
    let shift = w.d();
    let (p1, p2): (CohomologyPackage, CohomologyPackage) = (w.source.cohomology()?, w.target.cohomology()?);
    let (g1, g2) = (equivariant_groups(&p1)?, equivariant_groups(&p2)?);
    let (c1, c2) = (&w.source, &w.target);
    let two = Rational64::from_integer(2);

    let mut degrees: Vec<Degree> = c1
        .support()
        .into_iter()
        .map(|r| c1.abs_degree(r))
        .chain(c2.support().into_iter().map(|r| c2.abs_degree(r) + shift))
        .filter(|q| (*q - c1.chamber * 2).is_integer())
        .collect();
    // room for the towers on either side
    for extra in [g1.h * 2, g2.h * 2 + shift] {
        for i in -2..=2 {
            degrees.push(extra + Rational64::from_integer(i));
        }
    }
    degrees.retain(|q| (*q - c1.chamber * 2).is_integer());
    degrees.sort();
    degrees.dedup();

    let mut hf = BTreeMap::new();
    let mut reduced = BTreeMap::new();
    let mut over = BTreeMap::new();
    let mut under = BTreeMap::new();
    let mut u_fail = Vec::new();
    let mut square_fail = Vec::new();
    let mut factor_fail = Vec::new();
    for &q in &degrees {
        hf.insert(q, induced_block(&w.w, &p1, &p2, q, shift, false)?);
        let red = induced_block(&w.w, &p1, &p2, q, shift, true)
            .map_err(|e| Error::Inconsistent(format!("W does not preserve the reduced group: {e}")))?;
        over.insert(q, tail_map(&g1.over, &g2.over, Some(&red), q, shift, pw));
        under.insert(q, tail_map(&g1.under, &g2.under, Some(&red), q, shift, pw));
        reduced.insert(q, red);
    }
    for &q in &degrees {
        let red = &reduced[&q];
        let next = match reduced.get(&(q + two)) {
            Some(m) => m.clone(),
            None => induced_block(&w.w, &p1, &p2, q + two, shift, true)?,
        };
        let (r1, r2) = (c1.rel(q), c2.rel(q - shift));
        if p2.reduced_u(r2)?.mm(red, &k) != next.mm(&p1.reduced_u(r1)?, &k) {
            u_fail.push(format!("degree {}", fmt_degree(&q)));
        }
        // D₂ ψ̄ = P(W) D₁ and D′₂ P(W) = ψ̲ D′₁
        let pwq = if pw { int(1) } else { int(0) };
        let lhs = tower_row(&g2.over, q - shift).mm(&over[&q], &k);
        let rhs = tower_row(&g1.over, q).scale(&pwq, &k);
        let under_next = tail_map(&g1.under, &g2.under, None, q + Rational64::from_integer(1), shift, pw);
        let lhs2 = tower_col(&g2.under, q + Rational64::from_integer(1) - shift).scale(&pwq, &k);
        let rhs2 = under_next.mm(&tower_col(&g1.under, q + Rational64::from_integer(1)), &k);
        let poly_degree = (q - c1.chamber * 2).to_integer() % 2 == 0;
        if poly_degree && (lhs != rhs || lhs2 != rhs2) {
            square_fail.push(format!("degree {}", fmt_degree(&q)));
        }
        if !pw {
            // ker J ⊆ ker ψ̲, where J kills the tower of the lower limit
            let fin = g1.under.finite_dim(q);
            let tot = g1.under.dim(q);
            let jm = Matrix::from_fn(fin, tot, |i, j| if i == j { int(1) } else { int(0) });
            let ker = kernel(&jm, &k)?;
            if !under[&q].mm(&ker, &k).is_zero() {
                factor_fail.push(format!("degree {}", fmt_degree(&q)));
            }
        }
    }
    let mut checks = vec![
        Check::new("ψ̂ commutes with u", u_fail),
        Check::new("limit squares commute", square_fail),
    ];
    if !pw {
        checks.push(Check::new("ψ̲ factors through J", factor_fail));
    }
    Ok(InducedMaps {
        shift,
        hf,
        reduced,
        over,
        under,
        p_nonzero: pw,
        source_over: g1.over,
        target_over: g2.over,
        source_under: g1.under,
        target_under: g2.under,
        checks,
    })
}

/// Chain-level composite `W₂ ∘ W₁`.
///
/// `δ′_{W₂}` survives only when `k₁ = 0` (then `δ W₁` stands in for `δ`), and
/// `δ_{W₁}` only when `k₂ = 0`; otherwise those terms sit in the wrong degree.
pub fn compose(w1: &CobordismData, w2: &CobordismData) -> Result<CobordismData> {
    if w1.target != w2.source {
        return Err(Error::InvalidInput("cobordisms are not composable".into()));
    }
    let k = w1.coeff().clone();
    let w = w2.w.mm(&w1.w, &k);
    let mut delta_w = w1.w.transpose().apply(&w2.delta_w, &k);
    if w2.k() == Rational64::from_integer(0) {
        delta_w = delta_w.iter().zip(&w1.delta_w).map(|(x, y)| k.add(x, y)).collect();
    }
    let mut delta_w_prime = w2.w.apply(&w1.delta_w_prime, &k);
    if w1.k() == Rational64::from_integer(0) {
        delta_w_prime = delta_w_prime.iter().zip(&w2.delta_w_prime).map(|(x, y)| k.add(x, y)).collect();
    }
    let phi = w2.phi.mm(&w1.w, &k).add(&w2.w.mm(&w1.phi, &k), &k)?;
    let (t1, t2) = (&w1.topology, &w2.topology);
    let topology = Topology {
        b1: t1.b1 + t2.b1,
        bplus: t1.bplus + t2.bplus,
        b2: t1.b2 + t2.b2,
        sigma: t1.sigma + t2.sigma,
        c1sq: t1.c1sq + t2.c1sq,
    };
    CobordismData::new(w1.source.clone(), w2.target.clone(), w, delta_w, delta_w_prime, phi, topology)
}

/// Induced maps of a composite agree with composites of induced maps.
pub fn functoriality_holds(w1: &CobordismData, w2: &CobordismData) -> Result<bool> {
    let k = w1.coeff().clone();
    let (a, b, c) = (induced_maps(w1)?, induced_maps(w2)?, induced_maps(&compose(w1, w2)?)?);
    for (q, m) in &c.hf {
        let mid = *q - a.shift;
        let first = a.hf.get(q).cloned();
        let second = b.hf.get(&mid).cloned();
        let (Some(f), Some(s)) = (first, second) else { continue };
        if &s.mm(&f, &k) != m {
            return Ok(false);
        }
        if let (Some(fr), Some(sr)) = (a.reduced.get(q), b.reduced.get(&mid)) {
            if sr.mm(fr, &k) != c.reduced[q] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deltacx::{DeltaComplex, Generator};
    use crate::exactalg::linalg::is_identity;
    use crate::exactalg::Coefficients;

    fn sigma237() -> DeltaComplex {
        DeltaComplex::new(
            Coefficients::Rationals,
            Degree::from_integer(0),
            vec![Generator::new("a", Degree::from_integer(0))],
            Matrix::zeros(1, 1),
            Matrix::zeros(1, 1),
            vec![int(0)],
            vec![int(0)],
        )
        .unwrap()
    }

    #[test]
    fn identity_induces_identities() {
        let m = induced_maps(&CobordismData::identity(&sigma237())).unwrap();
        assert!(m.passed(), "{:?}", m.checks);
        for x in m.hf.values().chain(m.reduced.values()).chain(m.over.values()).chain(m.under.values()) {
            assert!(is_identity(x), "{x}");
        }
    }

    #[test]
    fn composing_with_identity() {
        let id = CobordismData::identity(&sigma237());
        assert!(functoriality_holds(&id, &id).unwrap());
        let c = compose(&id, &id).unwrap();
        assert_eq!(c, id);
    }

    #[test]
    fn b1_without_bplus_is_unsupported() {
        let mut w = CobordismData::identity(&sigma237());
        w.topology.b1 = 1;
        w.topology.c1sq = Rational64::from_integer(-4);
        assert!(matches!(induced_maps(&w), Err(Error::Unsupported(_))));
    }
}
