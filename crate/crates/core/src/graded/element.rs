use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::coeffs::{BaseRing, Scalar};
use crate::error::{Error, Result};

/// Exponent vector over a ring's generator list.
///
/// Ordered so that, within one degree, iteration runs in graded-lexicographic
/// order by generator position: `x2^3` precedes `x3^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut e = vec![0; ngens];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of generator factors, with multiplicity.
    pub fn total_exponent(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }

    pub fn degree(&self, degrees: &[u32]) -> u32 {
        self.0.iter().zip(degrees).map(|(e, d)| e * d).sum()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

/// A polynomial in a ring's generators: finitely many monomials with nonzero coefficients.
///
/// Elements do not hold a reference to their ring; arithmetic that needs degrees or
/// relations goes through [`super::PresentedRing`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElement {
    terms: BTreeMap<Monomial, Scalar>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement { terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, ngens: usize) -> Self {
        Self::from_terms([(Monomial::one(ngens), c)])
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        Self::from_terms([(m, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut out = RingElement::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn base(&self) -> Option<BaseRing> {
        self.terms.values().next().map(Scalar::ring)
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> RingElement {
        RingElement::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn neg(&self) -> RingElement {
        RingElement { terms: self.terms.iter().map(|(m, x)| (m.clone(), -x)).collect() }
    }

    /// Every term is a product of at least two positive-degree generators.
    pub fn is_decomposable(&self) -> bool {
        self.terms.keys().all(|m| m.total_exponent() >= 2)
    }

    /// The part made of single generators.
    pub fn linear_part(&self) -> RingElement {
        RingElement::from_terms(
            self.terms.iter().filter(|(m, _)| m.total_exponent() == 1).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Reinterpret coefficients over another base ring.
    pub fn change_ring(&self, ring: BaseRing) -> Result<RingElement> {
        let mut out = RingElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.change_ring(ring)?);
        }
        Ok(out)
    }

    /// Multiply by a nonzero integer clearing every denominator.
    pub fn clear_denominators(&self) -> (RingElement, num_bigint::BigInt) {
        use num_integer::Integer;
        let lcm = self.terms.values().fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let Some(base) = self.base() else { return (self.clone(), lcm) };
        let s = Scalar::from_bigint(base, lcm.clone());
        (self.scale(&s), lcm)
    }

    pub(crate) fn check_shape(&self, ngens: usize, base: BaseRing) -> Result<()> {
        for (m, c) in &self.terms {
            if m.0.len() != ngens {
                return Err(Error::InvalidRing(format!(
                    "monomial over {} generators used in a ring with {ngens}",
                    m.0.len()
                )));
            }
            if c.ring() != base {
                return Err(Error::MixedRings(base, c.ring()));
            }
        }
        Ok(())
    }
}
