use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use super::{induced_block, CobordismData};
use crate::chambers::EquivariantGroups;
use crate::deltacx::{fmt_degree, CohomologyPackage, Degree, DeltaComplex};
use crate::error::{Error, Result};
use crate::exactalg::{fmt_scalar, int, Coefficients, Matrix, Scalar};

/// Endomorphism `f₀ ⊕ f₁` of a mod-2 graded vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2GradedEndo {
    pub coeff: Coefficients,
    pub even: Matrix,
    pub odd: Matrix,
}

impl Mod2GradedEndo {
    pub fn new(coeff: Coefficients, even: Matrix, odd: Matrix) -> Result<Self> {
        coeff.require_field()?;
        if !even.is_square() || !odd.is_square() {
            return Err(Error::DimensionMismatch("graded blocks must be square".into()));
        }
        Ok(Mod2GradedEndo { even: even.convert(&coeff)?, odd: odd.convert(&coeff)?, coeff })
    }

    pub fn identity(coeff: Coefficients, even: usize, odd: usize) -> Self {
        Mod2GradedEndo { coeff, even: Matrix::identity(even), odd: Matrix::identity(odd) }
    }

    pub fn compose(&self, other: &Mod2GradedEndo) -> Result<Self> {
        Ok(Mod2GradedEndo {
            coeff: self.coeff.clone(),
            even: self.even.mul(&other.even, &self.coeff)?,
            odd: self.odd.mul(&other.odd, &self.coeff)?,
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        Mod2GradedEndo {
            coeff: self.coeff.clone(),
            even: self.even.pow(n, &self.coeff),
            odd: self.odd.pow(n, &self.coeff),
        }
    }

    /// Degree-preserving chain map `f`, split by `ind₂`.
    pub fn on_chains(c: &DeltaComplex, f: &Matrix) -> Result<Self> {
        let (ev, od): (Vec<usize>, Vec<usize>) = (0..c.len()).partition(|&i| c.ind2(c.generators[i].degree) == 0);
        Self::new(c.coeff.clone(), f.submatrix(&ev, &ev), f.submatrix(&od, &od))
    }

    /// The map induced by a degree-preserving chain map on `HF`.
    pub fn on_cohomology(p: &CohomologyPackage, f: &Matrix) -> Result<Self> {
        let k = p.coeff().clone();
        let (mut even, mut odd) = (Matrix::zeros(0, 0), Matrix::zeros(0, 0));
        for r in p.support() {
            let block = p.induced_endo(f, r, 0)?;
            if r.rem_euclid(2) == 0 {
                even = even.direct_sum(&block);
            } else {
                odd = odd.direct_sum(&block);
            }
        }
        Self::new(k, even, odd)
    }
}

/// `L(f) = tr f₀ - tr f₁`.
pub fn lefschetz(f: &Mod2GradedEndo) -> Scalar {
    f.coeff.sub(&f.even.trace(&f.coeff), &f.odd.trace(&f.coeff))
}

fn self_cobordism_data(w: &CobordismData, n: u32) -> Result<(CohomologyPackage, Rational64)> {
    if w.source != w.target {
        return Err(Error::InvalidInput("sw_trace needs a self-cobordism (source = target)".into()));
    }
    let d = w.d();
    if d != Rational64::from_integer(2 * i64::from(n)) {
        return Err(Error::InvalidInput(format!(
            "u^{n} ψ̂ is not degree-preserving: d = {} but 2n = {}",
            fmt_degree(&d),
            2 * n
        )));
    }
    Ok((w.source.cohomology()?, d))
}

/// `u^n ψ̂(W)` on `ĤF` as a mod-2 graded endomorphism; requires `d = 2n`.
pub fn sw_endo(w: &CobordismData, n: u32) -> Result<Mod2GradedEndo> {
    w.coeff().require_field()?;
    let (p, d) = self_cobordism_data(w, n)?;
    let k = p.coeff().clone();
    let c = p.complex();
    let (mut even, mut odd) = (Matrix::zeros(0, 0), Matrix::zeros(0, 0));
    for r in c.support() {
        let q = c.abs_degree(r);
        let mut m = induced_block(&w.w, &p, &p, q, d, true)?;
        for i in 0..n {
            m = p.reduced_u(r - 2 * i64::from(n) + 2 * i64::from(i))?.mm(&m, &k);
        }
        if r.rem_euclid(2) == 0 {
            even = even.direct_sum(&m);
        } else {
            odd = odd.direct_sum(&m);
        }
    }
    Mod2GradedEndo::new(k, even, odd)
}

/// `L(u^n ψ̂(W))`.
pub fn sw_trace(w: &CobordismData, n: u32) -> Result<Scalar> {
    Ok(lefschetz(&sw_endo(w, n)?))
}

/// `y · u^n x` for `x ∈ HF̄^{qx}` and `y ∈ H̲F̲^{qx+2n}`.
///
/// The finite parts are paired through the shared reduced-group basis and the
/// tower coordinates (if present on both sides) multiply.
pub fn sw_pairing(
    g: &EquivariantGroups,
    k: &Coefficients,
    x: (Degree, &[Scalar]),
    y: (Degree, &[Scalar]),
    n: u32,
) -> Result<Scalar> {
    let (qx, xv) = x;
    let (qy, yv) = y;
    let two = Degree::from_integer(2);
    if qy != qx + two * i64::from(n) {
        return Err(Error::Grading(format!(
            "pairing needs deg y = deg x + 2n, got {} and {}",
            fmt_degree(&qy),
            fmt_degree(&qx)
        )));
    }
    if xv.len() != g.over.dim(qx) || yv.len() != g.under.dim(qy) {
        return Err(Error::DimensionMismatch("pairing vectors do not match the limit groups".into()));
    }
    let mut v = xv.to_vec();
    let mut q = qx;
    for _ in 0..n {
        v = g.over.u(q).apply(&v, k);
        q += two;
    }
    let fin = g.hat.finite_dim(q);
    let mut s = Scalar::zero();
    for i in 0..fin {
        s = k.add(&s, &k.mul(&v[i], &yv[i]));
    }
    if v.len() > fin && yv.len() > fin {
        s = k.add(&s, &k.mul(&v[fin], &yv[fin]));
    }
    Ok(s)
}

/// Monic characteristic polynomial `det(λ - A)`, coefficients from `λ⁰` up.
pub fn char_poly(a: &Matrix) -> Result<Vec<Scalar>> {
    let q = Coefficients::Rationals;
    if !a.is_square() {
        return Err(Error::DimensionMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = a.rows();
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = int(1);
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        m = a.mm(&m, &q).add(&Matrix::identity(n).scale(&c[n - k + 1], &q), &q)?;
        c[n - k] = -a.mm(&m, &q).trace(&q) / int(k as i64);
    }
    Ok(c)
}

fn strip_zero_roots(mut c: Vec<Scalar>) -> Vec<Scalar> {
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
    }
    c
}

fn pad(a: &Matrix, r: usize) -> Matrix {
    a.direct_sum(&Matrix::zeros(r - a.rows(), r - a.rows()))
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceWindow {
    pub size: usize,
    pub window: (u32, u32),
    /// Power traces agree on the whole window.
    pub equal: bool,
    pub first_mismatch: Option<u32>,
    /// Characteristic polynomials with the `λ` factors removed (set when `equal`).
    pub char_poly_a: Option<Vec<String>>,
    pub char_poly_b: Option<Vec<String>>,
    pub char_polys_match: Option<bool>,
}

/// Compares `tr(Aⁿ)` and `tr(Bⁿ)` for `m ≤ n < 2r + m`.
pub fn trace_window_equal(a: &Matrix, b: &Matrix, m: u32) -> Result<TraceWindow> {
    if m < 1 {
        return Err(Error::InvalidInput("trace window needs m >= 1".into()));
    }
    if !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch("trace window needs square matrices".into()));
    }
    let q = Coefficients::Rationals;
    let (a, b) = (a.convert(&q)?, b.convert(&q)?);
    let r = a.rows().max(b.rows());
    let (a, b) = (pad(&a, r), pad(&b, r));
    let end = 2 * r as u32 + m;
    let (mut pa, mut pb) = (a.pow(m, &q), b.pow(m, &q));
    let mut first_mismatch = None;
    for n in m..end {
        if pa.trace(&q) != pb.trace(&q) {
            first_mismatch = Some(n);
            break;
        }
        pa = pa.mm(&a, &q);
        pb = pb.mm(&b, &q);
    }
    let equal = first_mismatch.is_none();
    let mut out = TraceWindow {
        size: r,
        window: (m, end),
        equal,
        first_mismatch,
        char_poly_a: None,
        char_poly_b: None,
        char_polys_match: None,
    };
    if equal {
        let (ca, cb) = (strip_zero_roots(char_poly(&a)?), strip_zero_roots(char_poly(&b)?));
        out.char_polys_match = Some(ca == cb);
        out.char_poly_a = Some(ca.iter().map(fmt_scalar).collect());
        out.char_poly_b = Some(cb.iter().map(fmt_scalar).collect());
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossPairing {
    pub window: TraceWindow,
    pub lefschetz_f: String,
    pub lefschetz_g: String,
    /// The window hypothesis held and `L(f) = L(g)` followed.
    pub reconstructed: bool,
}

/// Compares `f₀ ⊕ g₁` with `g₀ ⊕ f₁`: their power traces differ by `L(fⁿ) - L(gⁿ)`.
pub fn cross_pairing(f: &Mod2GradedEndo, g: &Mod2GradedEndo, m: u32) -> Result<CrossPairing> {
    let a = f.even.direct_sum(&g.odd);
    let b = g.even.direct_sum(&f.odd);
    let window = trace_window_equal(&a, &b, m)?;
    let (lf, lg) = (lefschetz(f), lefschetz(g));
    let reconstructed = window.equal && window.char_polys_match == Some(true) && lf == lg;
    Ok(CrossPairing {
        window,
        lefschetz_f: fmt_scalar(&lf),
        lefschetz_g: fmt_scalar(&lg),
        reconstructed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], n: usize) -> Matrix {
        Matrix::from_i64_rows(rows, n).unwrap()
    }

    #[test]
    fn lefschetz_examples() {
        let q = Coefficients::Rationals;
        assert_eq!(lefschetz(&Mod2GradedEndo::identity(q.clone(), 2, 1)), int(1));
        let f = Mod2GradedEndo::new(q, m(&[vec![0, 1], vec![1, 0]], 2), m(&[vec![2]], 1)).unwrap();
        assert_eq!(lefschetz(&f), int(-2));
    }

    #[test]
    fn char_poly_of_companion() {
        // λ³ - 2λ² + 3λ - 5
        let a = m(&[vec![0, 0, 5], vec![1, 0, -3], vec![0, 1, 2]], 3);
        assert_eq!(char_poly(&a).unwrap(), vec![int(-5), int(3), int(-2), int(1)]);
        assert_eq!(char_poly(&Matrix::zeros(0, 0)).unwrap(), vec![int(1)]);
    }

    #[test]
    fn window_examples() {
        let a = m(&[vec![1, 0], vec![0, -1]], 2);
        let b = m(&[vec![-1, 0], vec![0, 1]], 2);
        let w = trace_window_equal(&a, &b, 1).unwrap();
        assert!(w.equal && w.char_polys_match == Some(true));
        let c = m(&[vec![1, 0], vec![0, 2]], 2);
        assert!(!trace_window_equal(&a, &c, 1).unwrap().equal);
        assert!(trace_window_equal(&a, &b, 0).is_err());
        // nilpotent part is invisible from n = 2 on
        let nil = m(&[vec![0, 1], vec![0, 0]], 2);
        let w = trace_window_equal(&nil, &Matrix::zeros(1, 1), 1).unwrap();
        assert!(w.equal && w.char_polys_match == Some(true));
    }

    #[test]
    fn cross_pairing_identity() {
        let q = Coefficients::Rationals;
        let f = Mod2GradedEndo::identity(q.clone(), 2, 1);
        let g = Mod2GradedEndo::new(q, m(&[vec![1]], 1), Matrix::zeros(0, 0)).unwrap();
        let x = cross_pairing(&f, &g, 1).unwrap();
        assert!(x.reconstructed, "{x:?}");
    }
}
