use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring of every degreewise computation.
///
/// All three rings are principal ideal domains; `Local(p)` is the
/// localization of the integers at the prime `p`, i.e. rationals whose
/// denominator is coprime to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRing {
    Rational,
    Local(u64),
    PrimeField(u64),
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseRing {
    pub fn local(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(BaseRing::Local(p))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(BaseRing::PrimeField(p))
    }

    pub fn prime(&self) -> Option<u64> {
        match *self {
            BaseRing::Rational => None,
            BaseRing::Local(p) | BaseRing::PrimeField(p) => Some(p),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, BaseRing::Local(_))
    }

    /// Base change to the fraction field; `None` for prime fields.
    pub fn rationalized(&self) -> Option<BaseRing> {
        match self {
            BaseRing::PrimeField(_) => None,
            _ => Some(BaseRing::Rational),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_int(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_int(*self, 1)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseRing::Rational => Ok(()),
            BaseRing::Local(p) | BaseRing::PrimeField(p) => check_prime(p),
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p > 3 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Rational => write!(f, "Q"),
            BaseRing::Local(p) => write!(f, "Z_({p})"),
            BaseRing::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

// Document form: "Q" | {"Z_local": p} | {"F": p}.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BaseRingDoc {
    Name(String),
    Local {
        #[serde(rename = "Z_local")]
        z_local: u64,
    },
    Field {
        #[serde(rename = "F")]
        f: u64,
    },
}

impl Serialize for BaseRing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = match *self {
            BaseRing::Rational => BaseRingDoc::Name("Q".into()),
            BaseRing::Local(p) => BaseRingDoc::Local { z_local: p },
            BaseRing::PrimeField(p) => BaseRingDoc::Field { f: p },
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BaseRing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let ring = match BaseRingDoc::deserialize(d)? {
            BaseRingDoc::Name(n) if n == "Q" => BaseRing::Rational,
            BaseRingDoc::Name(n) => return Err(D::Error::custom(format!("unknown base ring {n:?}"))),
            BaseRingDoc::Local { z_local } => BaseRing::Local(z_local),
            BaseRingDoc::Field { f } => BaseRing::PrimeField(f),
        };
        ring.validate().map_err(D::Error::custom)?;
        Ok(ring)
    }
}

/// An exact element of a [`BaseRing`].
///
/// The value is stored as a reduced fraction. Over `Local(p)` the
/// denominator is coprime to `p`; over `PrimeField(p)` the value is an
/// integer in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: BaseRing,
    value: BigRational,
}

impl Scalar {
    pub fn from_int(ring: BaseRing, n: i64) -> Scalar {
        Scalar::from_bigint(ring, BigInt::from(n))
    }

    pub fn from_bigint(ring: BaseRing, n: BigInt) -> Scalar {
        let value = match ring {
            BaseRing::PrimeField(p) => BigRational::from_integer(n.mod_floor(&BigInt::from(p))),
            _ => BigRational::from_integer(n),
        };
        Scalar { ring, value }
    }

    /// `num / den` in `ring`; fails when the fraction does not live there.
    pub fn from_ratio(ring: BaseRing, num: BigInt, den: BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::NotInRing(format!("{num}/0"), ring));
        }
        Scalar::from_rational(ring, BigRational::new(num, den))
    }

    pub fn from_rational(ring: BaseRing, q: BigRational) -> Result<Scalar> {
        match ring {
            BaseRing::Rational => Ok(Scalar { ring, value: q }),
            BaseRing::Local(p) => {
                if q.denom().is_multiple_of(&BigInt::from(p)) {
                    Err(Error::NotInRing(q.to_string(), ring))
                } else {
                    Ok(Scalar { ring, value: q })
                }
            }
            BaseRing::PrimeField(p) => {
                let pb = BigInt::from(p);
                let den = q.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::NotInRing(q.to_string(), ring));
                }
                let inv = mod_inverse(&den, &pb);
                Ok(Scalar::from_bigint(ring, q.numer() * inv))
            }
        }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// p-adic valuation over `Local(p)`; 0 for nonzero field elements.
    pub fn valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.ring {
            BaseRing::Local(p) => {
                let pb = BigInt::from(p);
                let mut n = self.value.numer().abs();
                let mut v = 0;
                while n.is_multiple_of(&pb) {
                    n /= &pb;
                    v += 1;
                }
                Some(v)
            }
            _ => Some(0),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Key for deterministic pivot choice: valuation first, then size of numerator.
    pub(crate) fn pivot_key(&self) -> Option<(u32, BigInt)> {
        self.valuation().map(|v| (v, self.value.numer().abs()))
    }

    pub(crate) fn is_ideal_pivot(&self) -> bool {
        self.valuation() == Some(0) && self.value.numer().abs().is_one()
    }

    /// `self / rhs` when the quotient lies in the ring.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        assert_eq!(self.ring, rhs.ring, "scalar ring mismatch");
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        match self.ring {
            BaseRing::Rational => Some(Scalar { ring: self.ring, value: &self.value / &rhs.value }),
            BaseRing::Local(_) => {
                if self.valuation()? >= rhs.valuation()? {
                    Some(Scalar { ring: self.ring, value: &self.value / &rhs.value })
                } else {
                    None
                }
            }
            BaseRing::PrimeField(p) => {
                let pb = BigInt::from(p);
                let inv = mod_inverse(rhs.value.numer(), &pb);
                Some(Scalar::from_bigint(self.ring, self.value.numer() * inv))
            }
        }
    }

    pub fn divides(&self, other: &Scalar) -> bool {
        other.is_zero() || (!self.is_zero() && other.checked_div(self).is_some())
    }

    pub fn inverse(&self) -> Option<Scalar> {
        self.ring.one().checked_div(self)
    }

    /// Canonical associate: `p^v` over `Local(p)`, `1` over fields, `0` for zero.
    pub fn canonical_associate(&self) -> Scalar {
        match self.valuation() {
            None => self.clone(),
            Some(v) => match self.ring {
                BaseRing::Local(p) => Scalar::from_bigint(self.ring, num_traits::pow(BigInt::from(p), v as usize)),
                _ => self.ring.one(),
            },
        }
    }

    /// The unit `u` with `self = u * canonical_associate()`.
    pub fn unit_part(&self) -> Scalar {
        self.checked_div(&self.canonical_associate()).expect("associate divides")
    }

    /// Reinterpret over another ring (base change / reduction).
    pub fn change_ring(&self, ring: BaseRing) -> Result<Scalar> {
        Scalar::from_rational(ring, self.value.clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.value.is_integer() {
            self.value.numer().to_i64()
        } else {
            None
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.is_one(), "not invertible modulo p");
    e.x.mod_floor(p)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.value, self.ring)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ring, &self.value).cmp(&(other.ring, &other.value))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        assert_eq!(self.ring, rhs.ring, "scalar ring mismatch");
        match self.ring {
            BaseRing::PrimeField(_) => Scalar::from_bigint(self.ring, self.value.numer() + rhs.value.numer()),
            _ => Scalar { ring: self.ring, value: &self.value + &rhs.value },
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        assert_eq!(self.ring, rhs.ring, "scalar ring mismatch");
        match self.ring {
            BaseRing::PrimeField(_) => Scalar::from_bigint(self.ring, self.value.numer() - rhs.value.numer()),
            _ => Scalar { ring: self.ring, value: &self.value - &rhs.value },
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        assert_eq!(self.ring, rhs.ring, "scalar ring mismatch");
        match self.ring {
            BaseRing::PrimeField(_) => Scalar::from_bigint(self.ring, self.value.numer() * rhs.value.numer()),
            _ => Scalar { ring: self.ring, value: &self.value * &rhs.value },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self.ring {
            BaseRing::PrimeField(_) => Scalar::from_bigint(self.ring, -self.value.numer()),
            _ => Scalar { ring: self.ring, value: -&self.value },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5(n: i64) -> Scalar {
        Scalar::from_int(BaseRing::Local(5), n)
    }

    #[test]
    fn primes_at_most_three_are_rejected() {
        assert!(BaseRing::local(3).is_err());
        assert!(BaseRing::local(2).is_err());
        assert!(BaseRing::prime_field(9).is_err());
        assert!(BaseRing::local(7).is_ok());
    }

    #[test]
    fn local_ring_rejects_p_in_denominator() {
        let r = BaseRing::Local(5);
        assert!(Scalar::from_ratio(r, 1.into(), 5.into()).is_err());
        let half = Scalar::from_ratio(r, 1.into(), 2.into()).unwrap();
        assert!(half.is_unit());
    }

    #[test]
    fn valuations_and_division() {
        assert_eq!(z5(50).valuation(), Some(2));
        assert_eq!(z5(2).valuation(), Some(0));
        assert!(z5(5).checked_div(&z5(25)).is_none());
        assert_eq!(z5(25).checked_div(&z5(5)), Some(z5(5)));
        assert_eq!(z5(-50).canonical_associate(), z5(25));
        assert_eq!(&z5(-50).unit_part() * &z5(25), z5(-50));
    }

    #[test]
    fn prime_field_arithmetic_wraps() {
        let f = BaseRing::PrimeField(7);
        let a = Scalar::from_int(f, 5);
        let b = Scalar::from_int(f, 4);
        assert_eq!(&a + &b, Scalar::from_int(f, 2));
        assert_eq!(a.checked_div(&b).map(|q| &q * &b), Some(a.clone()));
        let third = Scalar::from_ratio(f, 1.into(), 3.into()).unwrap();
        assert_eq!(&third * &Scalar::from_int(f, 3), f.one());
    }

    #[test]
    fn base_ring_documents() {
        assert_eq!(serde_json::to_string(&BaseRing::Rational).unwrap(), "\"Q\"");
        assert_eq!(serde_json::to_string(&BaseRing::Local(5)).unwrap(), "{\"Z_local\":5}");
        let f: BaseRing = serde_json::from_str("{\"F\":7}").unwrap();
        assert_eq!(f, BaseRing::PrimeField(7));
        assert!(serde_json::from_str::<BaseRing>("{\"Z_local\":3}").is_err());
    }
}
