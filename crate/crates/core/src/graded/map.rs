use std::sync::Arc;

use super::element::RingElement;
use super::ideal::IdealSpan;
use super::ring::PresentedRing;
use crate::coeffs::SparseVec;
use crate::error::{Error, Result};

/// Graded ring homomorphism given by images of generators.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<PresentedRing>,
    target: Arc<PresentedRing>,
    images: Vec<RingElement>,
}

impl RingMap {
    /// Checks degrees of the images and that source relations map into target relations.
    pub fn new(source: Arc<PresentedRing>, target: Arc<PresentedRing>, images: Vec<RingElement>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::Dimension(format!("{} images for {} generators", images.len(), source.ngens())));
        }
        if source.base() != target.base() {
            return Err(Error::MixedRings(source.base(), target.base()));
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if let Some(d) = target.homogeneous_degree(img)? {
                if d != g.degree {
                    return Err(Error::Inhomogeneous(format!(
                        "{} of degree {} sent to {} of degree {d}",
                        g.name,
                        g.degree,
                        target.format(img)
                    )));
                }
            }
        }
        let map = RingMap { source, target, images };
        let span = IdealSpan::new(&map.target, Vec::new())?;
        for r in map.source.relations() {
            let img = map.apply(r)?;
            if !span.contains(&img)? {
                return Err(Error::InvalidRing(format!(
                    "relation {} maps to {}, not a relation of the target",
                    map.source.format(r),
                    map.target.format(&img)
                )));
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &Arc<PresentedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedRing> {
        &self.target
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    /// Substitute images for generators; components above the target's bound are dropped.
    pub fn apply(&self, e: &RingElement) -> Result<RingElement> {
        self.source.check(e)?;
        let t = &self.target;
        let mut out = RingElement::zero();
        for (m, c) in e.terms() {
            if self.source.monomial_degree(m) > t.truncation() {
                continue;
            }
            let mut term = RingElement::constant(c.clone(), t.ngens());
            for (i, &k) in m.exponents().iter().enumerate() {
                for _ in 0..k {
                    term = t.mul(&term, &self.images[i]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Matrix of the map in degree `d`, columns indexed by source monomials.
    pub fn degree_matrix(&self, d: u32) -> Result<Vec<SparseVec>> {
        self.source
            .basis(d)?
            .monomials()
            .iter()
            .map(|m| self.target.to_vector(&self.apply(&self.source.monomial_element(m.clone()))?, d))
            .collect()
    }

    /// Image of the degree-`d` piece equals the whole target piece (modulo target relations).
    pub fn is_surjective_in(&self, d: u32) -> Result<bool> {
        let mut lattice = self.target.degree_piece(d)?.relation_lattice(self.target.base());
        for col in self.degree_matrix(d)? {
            lattice.insert(col);
        }
        Ok(lattice.quotient_profile().is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::BaseRing;
    use crate::graded::Generator;

    #[test]
    fn substitution_and_checks() {
        let q = BaseRing::Rational;
        let src = Arc::new(
            PresentedRing::polynomial(q, vec![Generator::new("a", 4), Generator::new("b", 8)], 16).unwrap(),
        );
        let tgt = Arc::new(PresentedRing::polynomial(q, vec![Generator::new("t", 4)], 16).unwrap());
        let f = RingMap::new(src.clone(), tgt.clone(), vec![tgt.parse("t").unwrap(), tgt.parse("2*t^2").unwrap()])
            .unwrap();
        assert_eq!(tgt.format(&f.apply(&src.parse("b - 2*a^2").unwrap()).unwrap()), "0");
        assert_eq!(tgt.format(&f.apply(&src.parse("a*b").unwrap()).unwrap()), "2*t^3");
        assert!(f.is_surjective_in(8).unwrap());
        assert!(RingMap::new(src.clone(), tgt.clone(), vec![tgt.parse("t^2").unwrap(), tgt.parse("t").unwrap()]).is_err());

        let rel = src.parse("b").unwrap();
        let src_rel = Arc::new(PresentedRing::new(q, src.generators().to_vec(), vec![rel], 16).unwrap());
        assert!(RingMap::new(src_rel, tgt.clone(), vec![tgt.parse("t").unwrap(), tgt.parse("t^2").unwrap()]).is_err());
    }
}
