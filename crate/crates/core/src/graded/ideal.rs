use std::sync::OnceLock;

use super::element::RingElement;
use super::ring::PresentedRing;
use crate::coeffs::{InvariantFactorProfile, Lattice, SparseVec};
use crate::error::{Error, Result};

impl PresentedRing {
    /// Decide `e ∈ (gens)` in this presented ring.
    ///
    /// Returns homogeneous `a_i` with `e = Σ a_i g_i` modulo relations, or `None`.
    pub fn ideal_membership(&self, gens: &[RingElement], e: &RingElement) -> Result<Option<Vec<RingElement>>> {
        let Some(d) = self.homogeneous_degree(e)? else {
            return Ok(Some(vec![RingElement::zero(); gens.len()]));
        };
        let basis = self.basis(d)?;
        let n = basis.len();

        // Augmented columns (m*g ; tag) so the reduction records the combination.
        let mut tags = Vec::new();
        let mut lattice_vectors = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let Some(dg) = self.homogeneous_degree(g)? else { continue };
            if dg > d {
                continue;
            }
            for m in self.basis(d - dg)?.monomials() {
                let prod = self.mul(&self.monomial_element(m.clone()), g);
                let top = self.to_vector(&prod, d)?;
                lattice_vectors.push(top.concat(n, &SparseVec::unit(self.base(), tags.len())));
                tags.push((gi, m.clone()));
            }
        }
        let rel_cols = self.multiples_in_degree(self.relations(), d)?;
        let width = n + tags.len() + rel_cols.len();
        for (j, r) in rel_cols.into_iter().enumerate() {
            lattice_vectors.push(r.concat(n, &SparseVec::unit(self.base(), tags.len() + j)));
        }
        let lattice = Lattice::spanned_by(self.base(), width, lattice_vectors);
        let (rem, _) = lattice.reduce(&self.to_vector(e, d)?);
        if !rem.window(0..n).is_empty() {
            return Ok(None);
        }
        let mut out = vec![RingElement::zero(); gens.len()];
        for (i, c) in rem.iter() {
            if let Some((gi, m)) = tags.get(i - n) {
                out[*gi].add_term(m.clone(), -c);
            }
        }
        Ok(Some(out))
    }

    /// `Σ a_i g_i` for a membership witness.
    pub fn combine(&self, coeffs: &[RingElement], gens: &[RingElement]) -> Result<RingElement> {
        if coeffs.len() != gens.len() {
            return Err(Error::Dimension(format!("{} coefficients for {} generators", coeffs.len(), gens.len())));
        }
        Ok(coeffs.iter().zip(gens).fold(RingElement::zero(), |acc, (a, g)| acc.add(&self.mul(a, g))))
    }

    /// True when `a - b` lies in the relation ideal.
    pub fn equal_mod_relations(&self, a: &RingElement, b: &RingElement) -> Result<bool> {
        IdealSpan::new(self, Vec::new())?.contains(&a.sub(b))
    }
}

/// The homogeneous ideal `(gens) + (relations)`, one lattice per degree, built on demand.
pub struct IdealSpan<'a> {
    ring: &'a PresentedRing,
    gens: Vec<RingElement>,
    lattices: Vec<OnceLock<Lattice>>,
}

impl<'a> IdealSpan<'a> {
    pub fn new(ring: &'a PresentedRing, gens: Vec<RingElement>) -> Result<Self> {
        for g in &gens {
            ring.homogeneous_degree(g)?;
        }
        let lattices = (0..=ring.truncation()).map(|_| OnceLock::new()).collect();
        Ok(IdealSpan { ring, gens, lattices })
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.gens
    }

    /// Degree-`d` part of the ideal inside the monomial basis.
    pub fn lattice(&self, d: u32) -> Result<&Lattice> {
        if d > self.ring.truncation() {
            return Err(Error::DegreeOutOfRange { degree: d, bound: self.ring.truncation() });
        }
        if let Some(l) = self.lattices[d as usize].get() {
            return Ok(l);
        }
        let mut cols = self.ring.multiples_in_degree(self.ring.relations(), d)?;
        cols.extend(self.ring.multiples_in_degree(&self.gens, d)?);
        let l = Lattice::spanned_by(self.ring.base(), self.ring.dimension(d)?, cols);
        Ok(self.lattices[d as usize].get_or_init(|| l))
    }

    pub fn contains(&self, e: &RingElement) -> Result<bool> {
        match self.ring.homogeneous_degree(e)? {
            None => Ok(true),
            Some(d) => Ok(self.lattice(d)?.contains(&self.ring.to_vector(e, d)?)),
        }
    }

    /// Profile of the degree-`d` part of `R / I`.
    pub fn quotient_profile(&self, d: u32) -> Result<InvariantFactorProfile> {
        Ok(self.lattice(d)?.quotient_profile())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::BaseRing;
    use crate::graded::Generator;

    fn yz() -> PresentedRing {
        let z5 = BaseRing::Local(5);
        PresentedRing::polynomial(z5, vec![Generator::new("y", 60), Generator::new("z", 60)], 120).unwrap()
    }

    #[test]
    fn membership_examples() {
        let r = PresentedRing::polynomial(
            BaseRing::Rational,
            vec![Generator::new("x2", 8), Generator::new("x3", 12)],
            24,
        )
        .unwrap();
        let x3 = r.generator(1);
        assert_eq!(r.ideal_membership(&[x3], &r.parse("x2^3").unwrap()).unwrap(), None);

        let r = yz();
        let g = r.parse("5*z - 5*y").unwrap();
        let w = r.ideal_membership(&[g.clone()], &r.parse("5*z - 5*y").unwrap()).unwrap().unwrap();
        assert_eq!(w, vec![r.one()]);
        assert_eq!(r.ideal_membership(&[g], &r.parse("z - y").unwrap()).unwrap(), None);
    }

    #[test]
    fn relation_reduction_context() {
        let r = yz();
        let z5 = r.base();
        let rel = r.parse("5*z - 5*y").unwrap();
        let t = PresentedRing::new(z5, r.generators().to_vec(), vec![rel], 120).unwrap();
        let (fz, fy) = (t.parse("5*z").unwrap(), t.parse("5*y").unwrap());
        assert!(t.equal_mod_relations(&fz, &fy).unwrap());
        assert!(!t.equal_mod_relations(&t.parse("z").unwrap(), &t.parse("y").unwrap()).unwrap());
        // Witness self-check modulo relations.
        let e = t.parse("5*y*z - 5*y^2 + y*z").unwrap();
        let gens = [t.parse("z").unwrap()];
        let a = t.ideal_membership(&gens, &e).unwrap().unwrap();
        assert!(t.equal_mod_relations(&t.combine(&a, &gens).unwrap(), &e).unwrap());
    }

    #[test]
    fn inhomogeneous_rejected() {
        let r = PresentedRing::polynomial(BaseRing::Rational, vec![Generator::new("a", 4), Generator::new("b", 8)], 8)
            .unwrap();
        assert!(matches!(
            r.ideal_membership(&[r.generator(0)], &r.parse("a + b").unwrap()),
            Err(Error::Inhomogeneous(_))
        ));
    }

    #[test]
    fn ideal_span_quotient() {
        let r = PresentedRing::polynomial(
            BaseRing::Rational,
            vec![Generator::new("x2", 8), Generator::new("x3", 12), Generator::new("x4", 16)],
            48,
        )
        .unwrap();
        let span = IdealSpan::new(&r, vec![r.generator(2)]).unwrap();
        let plain = PresentedRing::polynomial(BaseRing::Rational, r.generators()[..2].to_vec(), 48).unwrap();
        for d in (0..=48).step_by(4) {
            assert_eq!(span.quotient_profile(d).unwrap().free_rank, plain.dimension(d).unwrap());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn witnesses_reproduce_element(a in prop::collection::vec(-4i64..=4, 3), b in prop::collection::vec(-4i64..=4, 2)) {
                let r = PresentedRing::polynomial(
                    BaseRing::Local(5),
                    vec![Generator::new("u", 4), Generator::new("v", 4), Generator::new("w", 8)],
                    16,
                ).unwrap();
                let gens = [r.parse("5*u^2 + v^2").unwrap(), r.parse("u*v - w").unwrap()];
                let e = r.parse(&format!("{}*u^2*v^2 + {}*v^4 + {}*w^2 + {}*u*v*w + {}*u^3*v", a[0], a[1], a[2], b[0], b[1])).unwrap();
                if let Some(coeffs) = r.ideal_membership(&gens, &e).unwrap() {
                    prop_assert_eq!(r.combine(&coeffs, &gens).unwrap(), e.clone());
                }
                let in_span = IdealSpan::new(&r, gens.to_vec()).unwrap().contains(&e).unwrap();
                prop_assert_eq!(in_span, r.ideal_membership(&gens, &e).unwrap().is_some());
            }
        }
    }
}
