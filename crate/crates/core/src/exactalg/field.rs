use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact scalar. Over a prime field the value is always an integer in `0..p`.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficient ring for all chain-level data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficients {
    Integers,
    Rationals,
    PrimeField { p: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Coefficients {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Coefficients::PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Field of the given characteristic: 0 gives the rationals.
    pub fn field_of_characteristic(p: u64) -> Result<Self> {
        if p == 0 {
            Ok(Coefficients::Rationals)
        } else {
            Self::prime_field(p)
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficients::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Coefficients::PrimeField { p } => *p,
            _ => 0,
        }
    }

    pub fn require_field(&self) -> Result<()> {
        if self.is_field() {
            Ok(())
        } else {
            Err(Error::NotAField)
        }
    }

    /// Reduce an exact value into canonical form for this ring.
    ///
    /// Fails for non-integers over ℤ and for denominators divisible by p.
    pub fn convert(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            Coefficients::Rationals => Ok(x.clone()),
            Coefficients::Integers => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(Error::InvalidInput(format!("{x} is not an integer")))
                }
            }
            Coefficients::PrimeField { p } => {
                let pb = BigInt::from(*p);
                let den = x.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "{x} has denominator divisible by {p}"
                    )));
                }
                let inv = mod_inverse(&den, &pb).expect("p prime and den nonzero");
                Ok(BigRational::from_integer(
                    (x.numer() * inv).mod_floor(&pb),
                ))
            }
        }
    }

    /// Canonical form of an arithmetic result (always representable).
    pub fn normalize(&self, x: Scalar) -> Scalar {
        match self {
            Coefficients::PrimeField { p } => {
                if x.is_integer() {
                    BigRational::from_integer(x.to_integer().mod_floor(&BigInt::from(*p)))
                } else {
                    self.convert(&x).expect("prime-field values stay integral")
                }
            }
            _ => x,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.normalize(-a.clone())
    }

    pub fn inverse(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::Inconsistent("inverse of zero".into()));
        }
        match self {
            Coefficients::Rationals => Ok(a.recip()),
            Coefficients::Integers => {
                if a.abs().is_one() {
                    Ok(a.clone())
                } else {
                    Err(Error::NotAField)
                }
            }
            Coefficients::PrimeField { p } => {
                let pb = BigInt::from(*p);
                let inv = mod_inverse(&a.to_integer().mod_floor(&pb), &pb)
                    .ok_or_else(|| Error::Inconsistent("non-invertible residue".into()))?;
                Ok(BigRational::from_integer(inv))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inverse(b)?))
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Rationals => write!(f, "Q"),
            Coefficients::PrimeField { p } => write!(f, "F_{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Exact value as `p/q` (or `p` when integral).
pub fn fmt_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_checked() {
        assert!(Coefficients::prime_field(7).is_ok());
        assert_eq!(Coefficients::prime_field(9), Err(Error::NotPrime(9)));
        assert_eq!(Coefficients::prime_field(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn prime_field_conversion() {
        let f5 = Coefficients::prime_field(5).unwrap();
        assert_eq!(f5.convert(&int(-1)).unwrap(), int(4));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f5.convert(&half).unwrap(), int(3));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert!(f5.convert(&fifth).is_err());
        assert_eq!(f5.inverse(&int(2)).unwrap(), int(3));
    }

    #[test]
    fn integers_reject_fractions() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert!(Coefficients::Integers.convert(&half).is_err());
        assert!(Coefficients::Integers.inverse(&int(2)).is_err());
        assert_eq!(Coefficients::Integers.inverse(&int(-1)).unwrap(), int(-1));
    }
}
