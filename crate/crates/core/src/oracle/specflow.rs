use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Piecewise-linear function through `points` (strictly increasing abscissae).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    pub points: Vec<(Rational64, Rational64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Rational64, Rational64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("a curve needs at least two points".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn constant(a: Rational64, b: Rational64, c: Rational64) -> Self {
        PiecewiseLinear { points: vec![(a, c), (b, c)] }
    }

    pub fn start(&self) -> Rational64 {
        self.points[0].0
    }

    pub fn end(&self) -> Rational64 {
        self.points.last().unwrap().0
    }

    pub fn eval(&self, t: Rational64) -> Rational64 {
        let p = &self.points;
        if t <= p[0].0 {
            return p[0].1;
        }
        for w in p.windows(2) {
            let ((t0, y0), (t1, y1)) = (w[0], w[1]);
            if t <= t1 {
                return y0 + (y1 - y0) * (t - t0) / (t1 - t0);
            }
        }
        p.last().unwrap().1
    }

    fn breakpoints(&self) -> impl Iterator<Item = Rational64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    fn restrict(&self, a: Rational64, b: Rational64) -> Self {
        let mut pts = vec![(a, self.eval(a))];
        pts.extend(self.points.iter().copied().filter(|p| p.0 > a && p.0 < b));
        pts.push((b, self.eval(b)));
        PiecewiseLinear { points: pts }
    }

    /// Pointwise difference, with breakpoints merged.
    fn minus(&self, other: &PiecewiseLinear) -> Self {
        let mut ts: Vec<Rational64> = self.breakpoints().chain(other.breakpoints()).collect();
        ts.sort();
        ts.dedup();
        PiecewiseLinear { points: ts.into_iter().map(|t| (t, self.eval(t) - other.eval(t))).collect() }
    }

    /// Signed zero crossings `(up, down)`; tangencies and endpoint zeros are errors.
    fn crossings(&self) -> Result<(u64, u64)> {
        let p = &self.points;
        if p[0].1.is_zero() || p.last().unwrap().1.is_zero() {
            return Err(Error::InvalidInput("curve vanishes at an endpoint".into()));
        }
        let (mut up, mut down) = (0, 0);
        let mut sign = p[0].1.signum();
        for (i, &(t, y)) in p.iter().enumerate().skip(1) {
            if y.is_zero() {
                let next = p[i + 1].1;
                if next.is_zero() {
                    return Err(Error::InvalidInput(format!("curve vanishes on an interval near t = {t}")));
                }
                if next.signum() == sign {
                    return Err(Error::InvalidInput(format!("curve touches zero without crossing at t = {t}")));
                }
                continue;
            }
            let s = y.signum();
            if s != sign {
                if s.is_positive() {
                    up += 1;
                } else {
                    down += 1;
                }
                sign = s;
            }
        }
        Ok((up, down))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub f: PiecewiseLinear,
    pub multiplicity: u32,
}

/// Eigenvalue curves of a path of operators `P_t`, `t ∈ [a, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueFamily {
    pub curves: Vec<Curve>,
}

impl EigenvalueFamily {
    pub fn new(curves: Vec<Curve>) -> Result<Self> {
        let Some(first) = curves.first() else {
            return Err(Error::InvalidInput("family needs at least one curve".into()));
        };
        let (a, b) = (first.f.start(), first.f.end());
        if curves.iter().any(|c| c.f.start() != a || c.f.end() != b) {
            return Err(Error::InvalidInput("all curves must share the parameter interval".into()));
        }
        Ok(EigenvalueFamily { curves })
    }

    pub fn interval(&self) -> (Rational64, Rational64) {
        (self.curves[0].f.start(), self.curves[0].f.end())
    }

    /// Restrictions to `[a, t]` and `[t, b]`.
    pub fn split_at(&self, t: Rational64) -> Result<(Self, Self)> {
        let (a, b) = self.interval();
        if t <= a || t >= b {
            return Err(Error::InvalidInput("split point must be interior".into()));
        }
        let part = |lo, hi| EigenvalueFamily {
            curves: self
                .curves
                .iter()
                .map(|c| Curve { f: c.f.restrict(lo, hi), multiplicity: c.multiplicity })
                .collect(),
        };
        Ok((part(a, t), part(t, b)))
    }

    /// Eigenvalues in `(0, h(t))`, with multiplicity.
    pub fn count_below(&self, h: &PiecewiseLinear, t: Rational64) -> u64 {
        let bar = h.eval(t);
        self.curves
            .iter()
            .filter(|c| {
                let y = c.f.eval(t);
                y > Rational64::zero() && y < bar
            })
            .map(|c| u64::from(c.multiplicity))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarrierCheck {
    pub n_a: u64,
    pub n_b: u64,
    /// `SF = n_b - n_a`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralFlow {
    pub sf: i64,
    pub up: u64,
    pub down: u64,
    pub barrier: Option<BarrierCheck>,
}

/// Up-crossings minus down-crossings, counted with multiplicity.
pub fn spectral_flow(e: &EigenvalueFamily, barrier: Option<&PiecewiseLinear>) -> Result<SpectralFlow> {
    let (mut up, mut down) = (0, 0);
    for c in &e.curves {
        let (u, d) = c.f.crossings()?;
        up += u * u64::from(c.multiplicity);
        down += d * u64::from(c.multiplicity);
    }
    let sf = up as i64 - down as i64;
    let barrier = match barrier {
        None => None,
        Some(h) => {
            let (a, b) = e.interval();
            if h.start() != a || h.end() != b {
                return Err(Error::InvalidInput("barrier must live on the family's interval".into()));
            }
            if h.points.iter().any(|p| p.1 <= Rational64::zero()) {
                return Err(Error::InvalidInput("barrier must be positive".into()));
            }
            for c in &e.curves {
                let diff = c.f.minus(h);
                let mut signs = diff.points.iter().map(|p| p.1.signum());
                let s0 = signs.next().unwrap();
                if s0.is_zero() || signs.any(|s| s != s0) {
                    return Err(Error::InvalidInput("an eigenvalue curve meets the barrier".into()));
                }
            }
            let (n_a, n_b) = (e.count_below(h, a), e.count_below(h, b));
            Some(BarrierCheck { n_a, n_b, holds: sf == n_b as i64 - n_a as i64 })
        }
    };
    Ok(SpectralFlow { sf, up, down, barrier })
}

/// `N` increasing curves with one zero each (on `[-1, 1]`), plus curves above `√2`.
pub fn berger_family(n: u32, high: u32) -> EigenvalueFamily {
    let r = Rational64::from_integer;
    let mut curves = Vec::new();
    for i in 0..n {
        let z = Rational64::new(i64::from(i) + 1, i64::from(n) + 2) * 2 - 1;
        curves.push(Curve {
            f: PiecewiseLinear { points: vec![(r(-1), r(-1)), (z, r(0)), (r(1), r(1))] },
            multiplicity: 1,
        });
    }
    for j in 0..high {
        curves.push(Curve {
            f: PiecewiseLinear::constant(r(-1), r(1), Rational64::new(3, 2) + i64::from(j)),
            multiplicity: 1,
        });
    }
    EigenvalueFamily { curves }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn line(a: i64, b: i64) -> Curve {
        Curve { f: PiecewiseLinear::new(vec![(r(-1), r(a)), (r(1), r(b))]).unwrap(), multiplicity: 1 }
    }

    #[test]
    fn simple_flows() {
        let e = EigenvalueFamily::new(vec![line(-1, 1)]).unwrap();
        assert_eq!(spectral_flow(&e, None).unwrap().sf, 1);
        let e = EigenvalueFamily::new(vec![line(-1, 1), line(1, -1)]).unwrap();
        assert_eq!(spectral_flow(&e, None).unwrap().sf, 0);
    }

    #[test]
    fn berger_counts_zeros() {
        let e = berger_family(5, 2);
        let h = PiecewiseLinear::constant(r(-1), r(1), Rational64::new(5, 4));
        let s = spectral_flow(&e, Some(&h)).unwrap();
        assert_eq!(s.sf, 5);
        assert_eq!(s.barrier, Some(BarrierCheck { n_a: 0, n_b: 5, holds: true }));
    }

    #[test]
    fn rejects_degenerate_curves() {
        let e = EigenvalueFamily::new(vec![line(0, 1)]).unwrap();
        assert!(spectral_flow(&e, None).is_err());
        let touch = PiecewiseLinear::new(vec![(r(-1), r(1)), (r(0), r(0)), (r(1), r(1))]).unwrap();
        let e = EigenvalueFamily::new(vec![Curve { f: touch, multiplicity: 2 }]).unwrap();
        assert!(spectral_flow(&e, None).is_err());
    }

    #[test]
    fn concatenation_is_additive() {
        let e = berger_family(3, 1);
        let (lo, hi) = e.split_at(Rational64::new(1, 7)).unwrap();
        let total = spectral_flow(&e, None).unwrap().sf;
        assert_eq!(spectral_flow(&lo, None).unwrap().sf + spectral_flow(&hi, None).unwrap().sf, total);
    }
}
