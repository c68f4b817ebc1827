//! h-invariant arithmetic: additivity, the definite-boundary inequality, lens
//! spaces and characteristic-vector searches.

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::determinant;
use crate::exactalg::{Coefficients, Matrix};

/// A negative definite 4-manifold candidate and its boundary components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySpec {
    pub components: Vec<(String, Rational64)>,
    pub b2: u32,
    pub sigma: i64,
    pub c1sq: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FroyshovCheck {
    /// `-Σ h(Y_j)`.
    pub lhs: Rational64,
    /// `(b₂ + c₁²)/8`.
    pub rhs: Rational64,
    pub satisfied: bool,
}

pub fn froyshov_check(b: &BoundarySpec) -> Result<FroyshovCheck> {
    if b.sigma != -i64::from(b.b2) {
        return Err(Error::InvalidInput(format!(
            "negative definite form needs sigma = -b2, got sigma = {} and b2 = {}",
            b.sigma, b.b2
        )));
    }
    let lhs = -b.components.iter().map(|(_, h)| *h).sum::<Rational64>();
    let rhs = (Rational64::from_integer(i64::from(b.b2)) + b.c1sq) / 8;
    Ok(FroyshovCheck { lhs, rhs, satisfied: lhs >= rhs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberForm {
    pub zeta: i64,
    /// `Σ m_j + (c₁² - σ)/8`.
    pub rhs: Rational64,
    /// The inequality only applies when the right side is positive.
    pub applicable: bool,
    pub satisfied: bool,
}

/// `ζ(Y₁, m₁) ≥ Σ m_j + (c₁² - σ)/8` whenever the right side is positive.
pub fn chamber_form(zeta1: i64, chambers: &[Rational64], c1sq: Rational64, sigma: i64) -> ChamberForm {
    let rhs = chambers.iter().copied().sum::<Rational64>() + (c1sq - Rational64::from_integer(sigma)) / 8;
    let applicable = rhs > Rational64::zero();
    ChamberForm {
        zeta: zeta1,
        rhs,
        applicable,
        satisfied: !applicable || Rational64::from_integer(zeta1) >= rhs,
    }
}

pub fn additivity_check(h1: Rational64, h2: Rational64, h12: Rational64) -> bool {
    h1 + h2 == h12
}

/// `h(L(q,1), s_j) = ((q-2j)²/q - 1)/8` for `j = 0..q-1`.
pub fn lens_h_table(q: i64) -> Result<Vec<Rational64>> {
    if q < 2 {
        return Err(Error::InvalidInput(format!("lens table needs q >= 2, got {q}")));
    }
    Ok((0..q)
        .map(|j| (Rational64::new((q - 2 * j) * (q - 2 * j), q) - 1) / 8)
        .collect())
}

/// The same invariant under the other normalization: `h = -d/2`.
pub fn h_from_correction_term(d: Rational64) -> Rational64 {
    -d / 2
}

pub fn correction_term_from_h(h: Rational64) -> Rational64 {
    -h * 2
}

/// Negative definite cobordism `S³ → L(q,1)` with `h` increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub q: i64,
    pub spin_c: i64,
    pub h_source: Rational64,
    pub h_target: Rational64,
    pub b2: u32,
}

impl Counterexample {
    pub fn monotonicity_fails(&self) -> bool {
        self.h_source < self.h_target
    }
}

/// The piece of `-qCP²` cut along `L(q,1)`, with a ball removed, read as a
/// cobordism from `S³`; its boundary spin^c structure `s₀` has `h = (q-1)/8`.
pub fn lens_counterexample(q: i64) -> Result<Counterexample> {
    let table = lens_h_table(q)?;
    Ok(Counterexample { q, spin_c: 0, h_source: Rational64::zero(), h_target: table[0], b2: q as u32 })
}

/// Gram matrix of the negative definite `E₈` form.
pub fn e8_gram() -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    // chain 0-1-2-3-4-5-6 with 7 attached to 4
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

pub fn diagonal_gram(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { -1 } else { 0 }).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharVectorMax {
    /// `max (n + c²)/8` over characteristic `c` in the box.
    pub value: Rational64,
    pub witness: Vec<i64>,
    /// `c²` computed in the negative definite orientation.
    pub norm: i64,
    pub bound: i64,
    /// Diagonal forms are exhausted by the `±1` box; otherwise the box is heuristic.
    pub exhaustive: bool,
}

fn definiteness(gram: &[Vec<i64>]) -> Result<i64> {
    let n = gram.len();
    if n == 0 || gram.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("Gram matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
            }
        }
    }
    let q = Coefficients::Rationals;
    let m = Matrix::from_i64_rows(gram, n)?;
    let idx: Vec<usize> = (0..n).collect();
    let minors: Vec<_> = (1..=n)
        .map(|k| determinant(&m.submatrix(&idx[..k], &idx[..k]), &q))
        .collect::<Result<_>>()?;
    let pos = minors.iter().all(|d| d > &Zero::zero());
    let neg = minors
        .iter()
        .enumerate()
        .all(|(k, d)| if k % 2 == 0 { d < &Zero::zero() } else { d > &Zero::zero() });
    match (pos, neg) {
        (true, _) => Ok(1),
        (_, true) => Ok(-1),
        _ => Err(Error::InvalidInput("Gram matrix is not definite".into())),
    }
}

fn is_diagonal_unit(g: &[Vec<i64>]) -> bool {
    g.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == if i == j { -1 } else { 0 }))
}

/// Maximizes `(n + c²)/8` over characteristic vectors with `|c_i| ≤ bound`.
///
/// A positive definite Gram matrix is negated first. Characteristic means
/// `(Gc)_i ≡ G_ii (mod 2)`, which only constrains `c mod 2`.
pub fn char_vector_max(gram: &[Vec<i64>], bound: i64) -> Result<CharVectorMax> {
    let sign = definiteness(gram)?;
    if bound < 1 {
        return Err(Error::InvalidInput("search box must be at least 1".into()));
    }
    let n = gram.len();
    if n > 24 {
        return Err(Error::InvalidInput("characteristic vector search limited to rank 24".into()));
    }
    let g: Vec<Vec<i128>> = gram.iter().map(|r| r.iter().map(|&x| i128::from(-sign * x)).collect()).collect();
    let parities: Vec<Vec<i64>> = (0u64..1 << n)
        .map(|mask| (0..n).map(|i| ((mask >> i) & 1) as i64).collect::<Vec<_>>())
        .filter(|p| {
            (0..n).all(|i| {
                let s: i128 = (0..n).map(|j| g[i][j] * i128::from(p[j])).sum();
                (s - g[i][i]).rem_euclid(2) == 0
            })
        })
        .collect();
    if parities.is_empty() {
        return Err(Error::Inconsistent("no characteristic parity class".into()));
    }
    let values = |parity: i64| -> Vec<i64> { (-bound..=bound).filter(|x| x.rem_euclid(2) == parity).collect() };
    let norm = |c: &[i64]| -> i128 {
        let mut s = 0i128;
        for i in 0..n {
            let mut t = 0i128;
            for j in 0..n {
                t += g[i][j] * i128::from(c[j]);
            }
            s += i128::from(c[i]) * t;
        }
        s
    };
    let best = parities
        .par_iter()
        .flat_map_iter(|p| values(p[0]).into_iter().map(move |x0| (p.clone(), x0)))
        .filter_map(|(p, x0)| {
            let choices: Vec<Vec<i64>> = (1..n).map(|i| values(p[i])).collect();
            if choices.iter().any(|c| c.is_empty()) {
                return None;
            }
            let mut idx = vec![0usize; n - 1];
            let mut best: Option<(i128, Vec<i64>)> = None;
            loop {
                let mut c = vec![x0];
                c.extend(idx.iter().enumerate().map(|(i, &k)| choices[i][k]));
                let v = norm(&c);
                if best.as_ref().is_none_or(|(b, w)| v > *b || (v == *b && c < *w)) {
                    best = Some((v, c));
                }
                let mut pos = 0;
                loop {
                    if pos == n - 1 {
                        return best;
                    }
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
            }
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (c2, witness) = best.ok_or_else(|| Error::Inconsistent("no characteristic vector in the box".into()))?;
    let c2 = i64::try_from(c2).map_err(|_| Error::InvalidInput("norm overflow".into()))?;
    Ok(CharVectorMax {
        value: Rational64::new(n as i64 + c2, 8),
        witness,
        norm: c2,
        bound,
        exhaustive: sign == -1 && is_diagonal_unit(gram) && bound >= 1,
    })
}

/// `⟨-1⟩ⁿ`, searched over the provably sufficient box `{±1}ⁿ`.
pub fn diagonal_char_vector_max(n: usize) -> Result<CharVectorMax> {
    if n == 0 {
        return Err(Error::InvalidInput("diagonal lattice needs n >= 1".into()));
    }
    char_vector_max(&diagonal_gram(n), 1)
}
