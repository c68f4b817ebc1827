//! JSON instance files.
//!
//! Rationals are `{"num": n, "den": d}` with `d > 0` and `gcd(n, d) = 1`;
//! matrices are row-major integer arrays.

use std::path::Path;

use floerkit::cobord::{CobordismData, Mod2GradedEndo, Topology};
use floerkit::deltacx::{DeltaComplex, Generator};
use floerkit::exactalg::field::scalar_to_i64;
use floerkit::exactalg::{int, Coefficients, Matrix, Scalar};
use floerkit::hinv::BoundarySpec;
use floerkit::oracle::{Curve, EigenvalueFamily, MorseModel, PiecewiseLinear};
use floerkit::{Error, Result};
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl RationalJson {
    pub fn to_rational(self) -> Result<Rational64> {
        if self.den <= 0 || self.num.gcd(&self.den) != 1 {
            return Err(Error::Parse(format!(
                "rational {}/{} must have positive denominator and be reduced",
                self.num, self.den
            )));
        }
        Ok(Rational64::new_raw(self.num, self.den))
    }
}

impl From<Rational64> for RationalJson {
    fn from(r: Rational64) -> Self {
        RationalJson { num: *r.numer(), den: *r.denom() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub label: String,
    pub degree: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub chamber: RationalJson,
    pub generators: Vec<GeneratorJson>,
    pub d: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub delta: Vec<i64>,
    pub delta_prime: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyJson {
    pub b1: u32,
    pub bplus: u32,
    pub b2: u32,
    pub sigma: i64,
    pub c1sq: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismJson {
    /// Defaults to the instance complex (a self-cobordism).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ComplexJson>,
    pub w: Vec<Vec<i64>>,
    pub delta_w: Vec<i64>,
    pub delta_w_prime: Vec<i64>,
    pub phi: Vec<Vec<i64>>,
    pub topology: TopologyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalPointJson {
    pub label: String,
    pub index: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseJson {
    pub n: u32,
    pub critical_points: Vec<CriticalPointJson>,
    pub differential: Vec<Vec<i64>>,
    pub flows_to_p: Vec<i64>,
    pub flows_from_p: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveJson {
    pub points: Vec<(RationalJson, RationalJson)>,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralFlowJson {
    pub curves: Vec<CurveJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barrier: Option<Vec<(RationalJson, RationalJson)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub name: String,
    /// Defaults to the `h` of the instance complex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<RationalJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryJson {
    pub components: Vec<ComponentJson>,
    pub b2: u32,
    pub sigma: i64,
    pub c1sq: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoJson {
    pub even: Vec<Vec<i64>>,
    pub odd: Vec<Vec<i64>>,
}

/// One instance: a δ-complex plus optional payloads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub origin: String,
    pub coefficients: Coefficients,
    pub complex: ComplexJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cobordism: Option<CobordismJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morse: Option<MorseJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_flow: Option<SpectralFlowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo: Option<EndoJson>,
    /// Values the instance is expected to produce, for documentation and tests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomManifest {
    pub format_version: u32,
    pub name: String,
    pub max_generators: usize,
    pub characteristics: Vec<u64>,
    pub seeds: Vec<u64>,
}

fn matrix(rows: &[Vec<i64>], r: usize, c: usize, what: &str) -> Result<Matrix> {
    if rows.is_empty() && r == 0 {
        return Ok(Matrix::zeros(0, c));
    }
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse(format!("{what} must be {r}x{c}")));
    }
    Matrix::from_i64_rows(rows, c)
}

fn vector(xs: &[i64], n: usize, what: &str) -> Result<Vec<Scalar>> {
    if xs.len() != n {
        return Err(Error::Parse(format!("{what} must have length {n}")));
    }
    Ok(xs.iter().map(|&x| int(x)).collect())
}

fn ints(m: &Matrix, what: &str) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows().map_err(|_| Error::Parse(format!("{what} has entries that are not small integers")))
}

fn int_vec(xs: &[Scalar], what: &str) -> Result<Vec<i64>> {
    xs.iter()
        .map(|x| scalar_to_i64(x).ok_or_else(|| Error::Parse(format!("{what} has a non-integral entry"))))
        .collect()
}

impl ComplexJson {
    pub fn to_complex(&self, k: &Coefficients) -> Result<DeltaComplex> {
        let n = self.generators.len();
        let gens = self
            .generators
            .iter()
            .map(|g| Ok(Generator::new(g.label.clone(), g.degree.to_rational()?)))
            .collect::<Result<Vec<_>>>()?;
        DeltaComplex::new(
            k.clone(),
            self.chamber.to_rational()?,
            gens,
            matrix(&self.d, n, n, "d")?,
            matrix(&self.v, n, n, "v")?,
            vector(&self.delta, n, "delta")?,
            vector(&self.delta_prime, n, "delta_prime")?,
        )
    }

    pub fn from_complex(c: &DeltaComplex) -> Result<Self> {
        Ok(ComplexJson {
            chamber: c.chamber.into(),
            generators: c
                .generators
                .iter()
                .map(|g| GeneratorJson { label: g.label.clone(), degree: g.degree.into() })
                .collect(),
            d: ints(&c.d, "d")?,
            v: ints(&c.v, "v")?,
            delta: int_vec(&c.delta, "delta")?,
            delta_prime: int_vec(&c.delta_prime, "delta_prime")?,
        })
    }
}

impl TopologyJson {
    pub fn to_topology(&self) -> Result<Topology> {
        Ok(Topology { b1: self.b1, bplus: self.bplus, b2: self.b2, sigma: self.sigma, c1sq: self.c1sq.to_rational()? })
    }
}

impl From<&Topology> for TopologyJson {
    fn from(t: &Topology) -> Self {
        TopologyJson { b1: t.b1, bplus: t.bplus, b2: t.b2, sigma: t.sigma, c1sq: t.c1sq.into() }
    }
}

fn pl(points: &[(RationalJson, RationalJson)]) -> Result<PiecewiseLinear> {
    let pts = points
        .iter()
        .map(|(t, y)| Ok((t.to_rational()?, y.to_rational()?)))
        .collect::<Result<Vec<_>>>()?;
    PiecewiseLinear::new(pts)
}

impl InstanceFile {
    pub fn new(name: &str, origin: &str, c: &DeltaComplex) -> Result<Self> {
        Ok(InstanceFile {
            format_version: FORMAT_VERSION,
            name: name.to_string(),
            origin: origin.to_string(),
            coefficients: c.coeff.clone(),
            complex: ComplexJson::from_complex(c)?,
            cobordism: None,
            morse: None,
            spectral_flow: None,
            boundary: None,
            endo: None,
            expected: None,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format version {}", f.format_version)));
        }
        if let Coefficients::PrimeField { p } = f.coefficients {
            Coefficients::prime_field(p)?;
        }
        f.complex()?;
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn complex(&self) -> Result<DeltaComplex> {
        self.complex.to_complex(&self.coefficients)
    }

    pub fn complex_with(&self, k: &Coefficients) -> Result<DeltaComplex> {
        self.complex.to_complex(k)
    }

    pub fn set_complex(&mut self, c: &DeltaComplex) -> Result<()> {
        self.coefficients = c.coeff.clone();
        self.complex = ComplexJson::from_complex(c)?;
        Ok(())
    }

    pub fn cobordism(&self, k: &Coefficients) -> Result<Option<CobordismData>> {
        let Some(cj) = &self.cobordism else { return Ok(None) };
        let source = self.complex_with(k)?;
        let target = match &cj.target {
            Some(t) => t.to_complex(k)?,
            None => source.clone(),
        };
        let (n1, n2) = (source.len(), target.len());
        Ok(Some(CobordismData::new(
            source,
            target,
            matrix(&cj.w, n2, n1, "w")?,
            vector(&cj.delta_w, n1, "delta_w")?,
            vector(&cj.delta_w_prime, n2, "delta_w_prime")?,
            matrix(&cj.phi, n2, n1, "phi")?,
            cj.topology.to_topology()?,
        )?))
    }

    pub fn set_cobordism(&mut self, w: &CobordismData) -> Result<()> {
        self.set_complex(&w.source)?;
        self.cobordism = Some(CobordismJson {
            target: if w.target == w.source { None } else { Some(ComplexJson::from_complex(&w.target)?) },
            w: ints(&w.w, "w")?,
            delta_w: int_vec(&w.delta_w, "delta_w")?,
            delta_w_prime: int_vec(&w.delta_w_prime, "delta_w_prime")?,
            phi: ints(&w.phi, "phi")?,
            topology: (&w.topology).into(),
        });
        Ok(())
    }

    pub fn morse(&self) -> Result<Option<MorseModel>> {
        let Some(m) = &self.morse else { return Ok(None) };
        let k = m.critical_points.len();
        Ok(Some(MorseModel {
            n: m.n,
            critical_points: m.critical_points.iter().map(|c| (c.label.clone(), c.index)).collect(),
            differential: matrix(&m.differential, k, k, "differential")?,
            flows_to_p: m.flows_to_p.clone(),
            flows_from_p: m.flows_from_p.clone(),
            v: m.v.as_ref().map(|v| matrix(v, k, k, "morse v")).transpose()?,
        }))
    }

    pub fn spectral_family(&self) -> Result<Option<(EigenvalueFamily, Option<PiecewiseLinear>)>> {
        let Some(s) = &self.spectral_flow else { return Ok(None) };
        let curves = s
            .curves
            .iter()
            .map(|c| Ok(Curve { f: pl(&c.points)?, multiplicity: c.multiplicity }))
            .collect::<Result<Vec<_>>>()?;
        let barrier = s.barrier.as_deref().map(pl).transpose()?;
        Ok(Some((EigenvalueFamily::new(curves)?, barrier)))
    }

    /// Boundary data, with missing `h` values taken from `h_default`.
    pub fn boundary(&self, h_default: impl Fn() -> Result<Rational64>) -> Result<Option<BoundarySpec>> {
        let Some(b) = &self.boundary else { return Ok(None) };
        let components = b
            .components
            .iter()
            .map(|c| Ok((c.name.clone(), match c.h { Some(h) => h.to_rational()?, None => h_default()? })))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(BoundarySpec { components, b2: b.b2, sigma: b.sigma, c1sq: b.c1sq.to_rational()? }))
    }

    pub fn endo(&self) -> Result<Option<Mod2GradedEndo>> {
        let Some(e) = &self.endo else { return Ok(None) };
        let sq = |rows: &[Vec<i64>], what| matrix(rows, rows.len(), rows.len(), what);
        Ok(Some(Mod2GradedEndo::new(self.coefficients.clone(), sq(&e.even, "even")?, sq(&e.odd, "odd")?)?))
    }
}

impl RandomManifest {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
