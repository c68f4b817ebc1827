//! Synthetic δ-complexes with known answers.
//!
//! A complex is assembled from pieces whose cohomology is known (a reduced
//! part with `d = 0`, one tower of prescribed length, acyclic pairs), glued by
//! terms that cannot change the answer, then conjugated by a random unimodular
//! change of basis and perturbed by `v ↦ v + dK + Kd`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cobord::{CobordismData, Topology};
use crate::deltacx::{Degree, DeltaComplex, Generator};
use crate::error::Result;
use crate::exactalg::linalg::inverse;
use crate::exactalg::{int, Coefficients, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    /// Upper bound on the number of generators (at most 40).
    pub max_generators: usize,
    pub coeff: Coefficients,
    /// Allow `m ∈ ½ℤ`.
    pub half_integral_chambers: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams { max_generators: 12, coeff: Coefficients::Rationals, half_integral_chambers: true }
    }
}

/// A generated complex with the invariants fixed by construction.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub seed: u64,
    pub complex: DeltaComplex,
    pub zeta: i64,
    pub h: Degree,
    /// `dim HF` by relative degree.
    pub hf_dims: BTreeMap<i64, usize>,
    /// `dim ĤF` by relative degree.
    pub reduced_dims: BTreeMap<i64, usize>,
}

struct Builder {
    rels: Vec<i64>,
    labels: Vec<String>,
    d: Vec<(usize, usize, i64)>,
    v: Vec<(usize, usize, i64)>,
    delta: Vec<(usize, i64)>,
    delta_prime: Vec<(usize, i64)>,
}

impl Builder {
    fn push(&mut self, prefix: &str, rel: i64) -> usize {
        self.labels.push(format!("{prefix}{}", self.rels.len()));
        self.rels.push(rel);
        self.rels.len() - 1
    }
}

fn small(rng: &mut ChaCha8Rng) -> i64 {
    *[-2i64, -1, 1, 2].choose(rng).unwrap()
}

/// Random degree-preserving unimodular matrix: products of elementary moves.
fn unimodular(rng: &mut ChaCha8Rng, rels: &[i64]) -> Matrix {
    let n = rels.len();
    let mut g = Matrix::identity(n);
    let k = Coefficients::Integers;
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || rels[i] != rels[j] {
            continue;
        }
        let c = int(small(rng));
        for col in 0..n {
            let x = k.add(g.get(i, col), &k.mul(&c, g.get(j, col)));
            g.set(i, col, x);
        }
    }
    let perm_sign = rng.gen_bool(0.5);
    if perm_sign && n > 0 {
        let i = rng.gen_range(0..n);
        let row = g.row(i);
        for (col, x) in row.iter().enumerate() {
            g.set(i, col, -x.clone());
        }
    }
    g
}

pub fn generate_random_delta(seed: u64, params: &RandomParams) -> Result<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = params.coeff.clone();
    let cap = params.max_generators.min(40);
    let chamber = if params.half_integral_chambers && rng.gen_bool(0.3) {
        Degree::new(rng.gen_range(-6..=6), 2)
    } else {
        Degree::from_integer(rng.gen_range(-3..=3))
    };
    if cap == 0 {
        let c = DeltaComplex::empty(k, chamber);
        return Ok(RandomInstance {
            seed,
            complex: c,
            zeta: 0,
            h: chamber,
            hf_dims: BTreeMap::new(),
            reduced_dims: BTreeMap::new(),
        });
    }
    let mut b = Builder { rels: vec![], labels: vec![], d: vec![], v: vec![], delta: vec![], delta_prime: vec![] };
    let zeta: i64 = rng.gen_range(-3..=3).clamp(-(cap as i64), cap as i64);
    let mut tower = Vec::new();
    for j in 0..zeta.unsigned_abs() as i64 {
        tower.push(if zeta > 0 { b.push("e", -2 - 2 * j) } else { b.push("f", 1 + 2 * j) });
    }
    if zeta > 0 {
        b.delta.push((tower[0], 1));
        for j in 1..tower.len() {
            b.v.push((tower[j - 1], tower[j], 1));
        }
    } else if zeta < 0 {
        b.delta_prime.push((tower[0], 1));
        for j in 1..tower.len() {
            b.v.push((tower[j], tower[j - 1], 1));
        }
    }
    let room = cap - tower.len();
    let n_red = rng.gen_range(0..=room.min(8));
    let n_pairs = rng.gen_range(0..=(room - n_red) / 2);
    let mut reduced = Vec::new();
    for _ in 0..n_red {
        reduced.push(b.push("x", rng.gen_range(-6..=5)));
    }
    let mut pairs = Vec::new();
    for _ in 0..n_pairs {
        let r = rng.gen_range(-6..=5);
        let a = b.push("a", r);
        let c = b.push("b", r + 1);
        b.d.push((c, a, 1));
        pairs.push((a, c));
    }
    // v within the reduced part, and from the tower into it
    for &x in &reduced {
        for &y in &reduced {
            if b.rels[y] == b.rels[x] + 2 && rng.gen_bool(0.5) {
                b.v.push((y, x, small(&mut rng)));
            }
        }
        for &t in &tower {
            if zeta > 0 && b.rels[x] == b.rels[t] + 2 && rng.gen_bool(0.5) {
                b.v.push((x, t, small(&mut rng)));
            }
            if zeta < 0 && b.rels[t] == b.rels[x] + 2 && rng.gen_bool(0.5) {
                b.v.push((t, x, small(&mut rng)));
            }
        }
        for &(_, c) in &pairs {
            if b.rels[c] == b.rels[x] + 2 && rng.gen_bool(0.3) {
                b.v.push((c, x, small(&mut rng)));
            }
        }
    }
    // chain maps between pairs
    for &(a1, c1) in &pairs {
        for &(a2, c2) in &pairs {
            if b.rels[a2] == b.rels[a1] + 2 && rng.gen_bool(0.3) {
                let s = small(&mut rng);
                b.v.push((a2, a1, s));
                b.v.push((c2, c1, s));
            }
        }
    }
    // δ on non-cocycles and δ′ along coboundaries
    let delta_side = zeta > 0 || (zeta == 0 && rng.gen_bool(0.5));
    for &(a, c) in &pairs {
        if delta_side && b.rels[a] == -2 && rng.gen_bool(0.5) {
            b.delta.push((a, small(&mut rng)));
        }
        if !delta_side && b.rels[c] == 1 && rng.gen_bool(0.5) {
            b.delta_prime.push((c, small(&mut rng)));
        }
    }

    let n = b.rels.len();
    let assemble = |entries: &[(usize, usize, i64)]| {
        let mut m = Matrix::zeros(n, n);
        for &(i, j, x) in entries {
            let y = m.get(i, j) + int(x);
            m.set(i, j, y);
        }
        m
    };
    let z = Coefficients::Integers;
    let mut d = assemble(&b.d);
    let mut v = assemble(&b.v);
    let mut delta = vec![Scalar::zero(); n];
    for &(i, x) in &b.delta {
        delta[i] = int(x);
    }
    let mut delta_prime = vec![Scalar::zero(); n];
    for &(i, x) in &b.delta_prime {
        delta_prime[i] = int(x);
    }

    // v ↦ v + dK + Kd with K of degree +1
    let mut kk = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if b.rels[i] == b.rels[j] + 1 && rng.gen_bool(0.2) {
                kk.set(i, j, int(small(&mut rng)));
            }
        }
    }
    v = v.add(&d.mm(&kk, &z).add(&kk.mm(&d, &z), &z)?, &z)?;

    // conjugate by a unimodular change of basis and shuffle the order
    let g = unimodular(&mut rng, &b.rels);
    let gi = inverse(&g, &z)?;
    d = g.mm(&d, &z).mm(&gi, &z);
    v = g.mm(&v, &z).mm(&gi, &z);
    delta = gi.transpose().apply(&delta, &z);
    delta_prime = g.apply(&delta_prime, &z);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let d = d.submatrix(&order, &order);
    let v = v.submatrix(&order, &order);
    let delta: Vec<Scalar> = order.iter().map(|&i| delta[i].clone()).collect();
    let delta_prime: Vec<Scalar> = order.iter().map(|&i| delta_prime[i].clone()).collect();
    let gens: Vec<Generator> = order
        .iter()
        .map(|&i| Generator::new(b.labels[i].clone(), chamber * 2 + Degree::from_integer(b.rels[i])))
        .collect();

    let mut hf_dims = BTreeMap::new();
    let mut reduced_dims = BTreeMap::new();
    for &x in &reduced {
        *hf_dims.entry(b.rels[x]).or_insert(0) += 1;
        *reduced_dims.entry(b.rels[x]).or_insert(0) += 1;
    }
    for &t in &tower {
        *hf_dims.entry(b.rels[t]).or_insert(0) += 1;
    }
    let complex = DeltaComplex::new(k, chamber, gens, d, v, delta, delta_prime)?;
    Ok(RandomInstance {
        seed,
        complex,
        zeta,
        h: chamber - Degree::from_integer(zeta),
        hf_dims,
        reduced_dims,
    })
}

/// Self-map `g` of the chain groups inducing a cylinder-type cobordism `c → gc`.
pub fn random_conjugation(c: &DeltaComplex, seed: u64) -> Result<CobordismData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = c.coeff.clone();
    let g = unimodular(&mut rng, &c.rels()).convert(&k)?;
    let gi = inverse(&g, &k)?;
    let target = DeltaComplex {
        coeff: k.clone(),
        chamber: c.chamber,
        generators: c.generators.clone(),
        d: g.mm(&c.d, &k).mm(&gi, &k),
        v: g.mm(&c.v, &k).mm(&gi, &k),
        delta: gi.transpose().apply(&c.delta, &k),
        delta_prime: g.apply(&c.delta_prime, &k),
    };
    let n = c.len();
    CobordismData::new(
        c.clone(),
        target,
        g,
        vec![Scalar::zero(); n],
        vec![Scalar::zero(); n],
        Matrix::zeros(n, n),
        Topology::cylinder(),
    )
}

/// Cobordism `A ⊕ T₁ → A ⊕ T₂` with `b⁺ = 1`, `d = 0`: identity on the reduced
/// part `A`, zero on the towers.
pub fn random_bplus_cobordism(seed: u64, coeff: &Coefficients) -> Result<CobordismData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = Degree::from_integer(rng.gen_range(-2..=2));
    let n_a = rng.gen_range(1..=4);
    let rels_a: Vec<i64> = (0..n_a).map(|_| rng.gen_range(-5..=4)).collect();
    let tower = |rng: &mut ChaCha8Rng| -> i64 { rng.gen_range(-2..=2) };
    let (z1, z2) = (tower(&mut rng), tower(&mut rng));
    let build = |z: i64, rng: &mut ChaCha8Rng| -> Result<DeltaComplex> {
        let mut rels = rels_a.clone();
        let mut labels: Vec<String> = (0..n_a).map(|i| format!("x{i}")).collect();
        let len = z.unsigned_abs() as usize;
        for j in 0..len as i64 {
            rels.push(if z > 0 { -2 - 2 * j } else { 1 + 2 * j });
            labels.push(format!("t{j}"));
        }
        let n = rels.len();
        let mut v = Matrix::zeros(n, n);
        for i in 0..n_a {
            for j in 0..n_a {
                if rels[i] == rels[j] + 2 {
                    v.set(i, j, int(small(rng)));
                }
            }
        }
        let mut delta = vec![Scalar::zero(); n];
        let mut delta_prime = vec![Scalar::zero(); n];
        for j in 1..len {
            let (a, b) = (n_a + j - 1, n_a + j);
            if z > 0 {
                v.set(a, b, int(1));
            } else {
                v.set(b, a, int(1));
            }
        }
        if z > 0 {
            delta[n_a] = int(1);
        } else if z < 0 {
            delta_prime[n_a] = int(1);
        }
        let gens = rels
            .iter()
            .zip(labels)
            .map(|(r, l)| Generator::new(l, m * 2 + Degree::from_integer(*r)))
            .collect();
        DeltaComplex::new(coeff.clone(), m, gens, Matrix::zeros(n, n), v, delta, delta_prime)
    };
    let c1 = build(z1, &mut rng)?;
    // the reduced blocks must agree for W = id ⊕ 0 to commute with v
    let mut c2 = build(z2, &mut rng)?;
    for i in 0..n_a {
        for j in 0..n_a {
            c2.v.set(i, j, c1.v.get(i, j).clone());
        }
    }
    let (n1, n2) = (c1.len(), c2.len());
    let w = Matrix::from_fn(n2, n1, |i, j| if i == j && i < n_a { int(1) } else { int(0) });
    let topology = Topology { b1: 0, bplus: 1, b2: 2, sigma: 0, c1sq: num_rational::Rational64::from_integer(4) };
    CobordismData::new(c1, c2, w, vec![Scalar::zero(); n1], vec![Scalar::zero(); n2], Matrix::zeros(n2, n1), topology)
}
