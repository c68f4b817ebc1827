use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::deltacx::{fmt_degree, CohomologyPackage, Degree};
use crate::error::Result;
use crate::exactalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Degrees `base, base+2, …`.
    Up,
    /// Degrees `base, base-2, …`.
    Down,
    /// Degrees `base + 2Z`.
    Full,
}

/// Rank-one string of copies of the field on which `u` is the identity shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub base: Degree,
    pub direction: Direction,
    /// `(q - 2m) mod 2` for any degree `q` of the tower.
    pub parity: u8,
}

impl Tower {
    pub fn contains(&self, q: Degree) -> bool {
        let r = q - self.base;
        if !r.is_integer() || r.to_integer().rem_euclid(2) != 0 {
            return false;
        }
        match self.direction {
            Direction::Up => q >= self.base,
            Direction::Down => q <= self.base,
            Direction::Full => true,
        }
    }
}

/// Finite graded module plus finitely many towers.
#[derive(Clone, Debug, Default)]
pub struct TailModule {
    pub finite: BTreeMap<Degree, usize>,
    /// `u` on the finite part, from degree `q` to `q+2`.
    pub finite_u: BTreeMap<Degree, Matrix>,
    pub towers: Vec<Tower>,
}

impl TailModule {
    pub fn finite_dim(&self, q: Degree) -> usize {
        self.finite.get(&q).copied().unwrap_or(0)
    }

    pub fn dim(&self, q: Degree) -> usize {
        self.finite_dim(q) + self.towers.iter().filter(|t| t.contains(q)).count()
    }

    /// `u` on the whole module: finite block plus identity on each tower.
    pub fn u(&self, q: Degree) -> Matrix {
        let two = Degree::from_integer(2);
        let fin = self
            .finite_u
            .get(&q)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.finite_dim(q + two), self.finite_dim(q)));
        let src: Vec<usize> = (0..self.towers.len()).filter(|&i| self.towers[i].contains(q)).collect();
        let dst: Vec<usize> =
            (0..self.towers.len()).filter(|&i| self.towers[i].contains(q + two)).collect();
        let mut tow = Matrix::zeros(dst.len(), src.len());
        for (b, i) in dst.iter().enumerate() {
            if let Some(a) = src.iter().position(|j| j == i) {
                tow.set(b, a, crate::exactalg::int(1));
            }
        }
        fin.direct_sum(&tow)
    }
}

impl fmt::Display for TailModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .finite
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(q, d)| format!("F^{d} in degree {}", fmt_degree(q)))
            .collect();
        let mut out = parts;
        for t in &self.towers {
            let two = Degree::from_integer(2);
            out.push(match t.direction {
                Direction::Up => format!(
                    "tower F in degrees {}, {}, ...",
                    fmt_degree(&t.base),
                    fmt_degree(&(t.base + two))
                ),
                Direction::Down => format!(
                    "tower F in degrees {}, {}, ...",
                    fmt_degree(&t.base),
                    fmt_degree(&(t.base - two))
                ),
                Direction::Full => format!("F in every degree {} + 2Z", fmt_degree(&t.base)),
            });
        }
        if out.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", out.join("; "))
        }
    }
}

/// The two equivariant limits and the reduced group.
#[derive(Clone, Debug)]
pub struct EquivariantGroups {
    pub h: Degree,
    pub over: TailModule,
    pub under: TailModule,
    pub hat: TailModule,
    pub poly: TailModule,
}

pub fn equivariant_groups(p: &CohomologyPackage) -> Result<EquivariantGroups> {
    p.coeff().require_field()?;
    let c = p.complex();
    let h = p.h()?;
    let mut hat = TailModule::default();
    for r in c.support() {
        let q = c.abs_degree(r);
        let d = p.reduced_dim(r);
        if d > 0 {
            hat.finite.insert(q, d);
        }
    }
    for r in c.support() {
        let u = p.reduced_u(r)?;
        if u.rows() > 0 && u.cols() > 0 {
            hat.finite_u.insert(c.abs_degree(r), u);
        }
    }
    let parity = |q: Degree| (q - c.chamber * 2).to_integer().rem_euclid(2) as u8;
    let two_h = h * 2;
    let one = Degree::from_integer(1);
    let mut over = hat.clone();
    over.towers.push(Tower { base: two_h, direction: Direction::Up, parity: parity(two_h) });
    let mut under = hat.clone();
    under.towers.push(Tower {
        base: two_h - one,
        direction: Direction::Down,
        parity: parity(two_h - one),
    });
    let poly = TailModule {
        towers: vec![Tower { base: c.chamber * 2, direction: Direction::Full, parity: 0 }],
        ..TailModule::default()
    };
    Ok(EquivariantGroups { h, over, under, hat, poly })
}
