//! Exact scalars: big integers, rationals and residues.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A value in ℤ, ℚ or ℤ/n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

/// The ring a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    Residues(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::Residues(n) => write!(f, "Z/{n}"),
        }
    }
}

fn mod_reduce(v: &BigInt, n: u64) -> u64 {
    v.mod_floor(&BigInt::from(n)).to_u64().expect("residue fits")
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(n as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(n as i128) as u64)
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Int(BigInt::from(v))
    }

    pub fn rat(num: i64, den: i64) -> Self {
        Scalar::Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn residue(value: i64, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus.to_string()));
        }
        Ok(Scalar::Mod { value: mod_reduce(&BigInt::from(value), modulus), modulus })
    }

    pub fn zero_in(ring: Ring) -> Self {
        match ring {
            Ring::Integers => Scalar::Int(BigInt::zero()),
            Ring::Rationals => Scalar::Rat(BigRational::zero()),
            Ring::Residues(n) => Scalar::Mod { value: 0, modulus: n },
        }
    }

    pub fn one_in(ring: Ring) -> Self {
        match ring {
            Ring::Integers => Scalar::Int(BigInt::one()),
            Ring::Rationals => Scalar::Rat(BigRational::one()),
            Ring::Residues(n) => Scalar::Mod { value: 1, modulus: n },
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integers,
            Scalar::Rat(_) => Ring::Rationals,
            Scalar::Mod { modulus, .. } => Ring::Residues(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    /// Whether the value is a unit of its ring.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Int(v) => v.abs().is_one(),
            Scalar::Rat(v) => !v.is_zero(),
            Scalar::Mod { value, modulus } => mod_inverse(*value, *modulus).is_some(),
        }
    }

    /// Move the value into `ring`. Integers map anywhere, rationals map into
    /// ℤ/n when the denominator is invertible, residues only stay put.
    pub fn convert(&self, ring: Ring) -> Result<Scalar> {
        match (self, ring) {
            (s, r) if s.ring() == r => Ok(s.clone()),
            (Scalar::Int(v), Ring::Rationals) => Ok(Scalar::Rat(BigRational::from_integer(v.clone()))),
            (Scalar::Int(v), Ring::Residues(n)) => Ok(Scalar::Mod { value: mod_reduce(v, n), modulus: n }),
            (Scalar::Rat(v), Ring::Integers) if v.is_integer() => Ok(Scalar::Int(v.to_integer())),
            (Scalar::Rat(v), Ring::Residues(n)) => {
                let num = mod_reduce(v.numer(), n);
                let den = mod_reduce(v.denom(), n);
                let inv = mod_inverse(den, n).ok_or_else(|| {
                    Error::NotInvertible(format!("denominator {} modulo {n}", v.denom()))
                })?;
                Ok(Scalar::Mod { value: ((num as u128 * inv as u128) % n as u128) as u64, modulus: n })
            }
            (s, r) => Err(Error::RingMismatch(format!("cannot move {s} from {} into {r}", s.ring()))),
        }
    }

    fn common_ring(&self, other: &Scalar) -> Result<Ring> {
        match (self.ring(), other.ring()) {
            (a, b) if a == b => Ok(a),
            (Ring::Residues(a), Ring::Residues(b)) => {
                Err(Error::RingMismatch(format!("moduli {a} and {b} differ")))
            }
            (Ring::Residues(n), _) | (_, Ring::Residues(n)) => Ok(Ring::Residues(n)),
            _ => Ok(Ring::Rationals),
        }
    }

    fn lift(&self, other: &Scalar) -> Result<(Scalar, Scalar)> {
        let r = self.common_ring(other)?;
        Ok((self.convert(r)?, other.convert(r)?))
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.lift(other)? {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => {
                Scalar::Mod { value: ((a as u128 + b as u128) % modulus as u128) as u64, modulus }
            }
            _ => unreachable!("lift returns a common variant"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        Ok(match self.lift(other)? {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, modulus }, Scalar::Mod { value: b, .. }) => {
                Scalar::Mod { value: ((a as u128 * b as u128) % modulus as u128) as u64, modulus }
            }
            _ => unreachable!("lift returns a common variant"),
        })
    }

    /// Multiplicative inverse within the scalar's own ring.
    pub fn inverse(&self) -> Result<Scalar> {
        let fail = || Error::NotInvertible(self.to_string());
        match self {
            Scalar::Int(a) if a.abs().is_one() => Ok(self.clone()),
            Scalar::Int(_) => Err(fail()),
            Scalar::Rat(a) if !a.is_zero() => Ok(Scalar::Rat(a.recip())),
            Scalar::Rat(_) => Err(fail()),
            Scalar::Mod { value, modulus } => mod_inverse(*value, *modulus)
                .map(|v| Scalar::Mod { value: v, modulus: *modulus })
                .ok_or_else(fail),
        }
    }

    /// The value as a rational, when it is not a residue.
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Scalar::Int(a) => Ok(BigRational::from_integer(a.clone())),
            Scalar::Rat(a) => Ok(a.clone()),
            Scalar::Mod { .. } => Err(Error::RingMismatch("residue has no rational value".into())),
        }
    }

    /// The value as an integer, when it is one.
    pub fn to_integer(&self) -> Result<BigInt> {
        match self {
            Scalar::Int(a) => Ok(a.clone()),
            Scalar::Rat(a) if a.is_integer() => Ok(a.to_integer()),
            _ => Err(Error::NotInteger),
        }
    }

    /// Parse `"7"`, `"-3"` or `"p/q"`.
    pub fn parse(text: &str) -> Result<Scalar> {
        let t = text.trim();
        let bad = || Error::RingMismatch(format!("cannot parse scalar {text:?}"));
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::Rat(BigRational::new(p, q)))
        } else {
            Ok(Scalar::Int(t.parse().map_err(|_| bad())?))
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(a) => write!(f, "{a}"),
            Scalar::Rat(a) => write!(f, "{a}"),
            Scalar::Mod { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::Int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Rat(v)
    }
}
