use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{PresentedRing, RingElement, RingMap};
use crate::models::{HoveyPresentation, critical_degree, critical_index, mo8_case1_model, mo8_local_presentation, mo8_rational, tmf_model};
use crate::quotient::{OrderPolicy, QuotientTower, SeqElement, SequenceSpec, quotient_by_sequence, ring_module};

/// A sequence over `Q[x2, x3, ...]` truncated at `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSequence {
    pub bound: u32,
    pub elements: Vec<String>,
}

impl RationalSequence {
    pub fn ring(&self) -> Result<PresentedRing> {
        mo8_rational(self.bound)
    }

    pub fn parse(&self, ring: &PresentedRing) -> Result<Vec<SeqElement>> {
        self.elements.iter().map(|e| SeqElement::parse(ring, e)).collect()
    }
}

/// A sequence over the p-local presentation `T/(r)` truncated at `bound <= 2(p + p^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSequence {
    pub prime: u64,
    pub bound: u32,
    /// Decomposable part of the relation, `"0"` for none.
    pub tail: String,
    pub elements: Vec<String>,
}

impl LocalSequence {
    /// `(x4, ..., x_{n-1}, y_n)` through `bound`.
    pub fn canonical(prime: u64, bound: u32) -> Self {
        let n = critical_index(prime);
        let mut elements: Vec<String> = (4..n).filter(|k| 4 * k <= bound).map(|k| format!("x{k}")).collect();
        if 4 * n <= bound {
            elements.push(format!("y{n}"));
        }
        LocalSequence { prime, bound, tail: "0".into(), elements }
    }

    pub fn tail_element(&self) -> Result<Option<RingElement>> {
        let free = HoveyPresentation::free_ring(self.prime, critical_degree(self.prime))?;
        let tail = free.parse(&self.tail)?;
        Ok((!tail.is_zero()).then_some(tail))
    }

    pub fn presentation(&self) -> Result<HoveyPresentation> {
        mo8_local_presentation(self.prime, self.bound, self.tail_element()?)
    }

    pub fn parse(&self, h: &HoveyPresentation) -> Result<Vec<SeqElement>> {
        self.elements.iter().map(|e| SeqElement::parse(&h.ring, e)).collect()
    }

    /// Images in `Q[x2, x3, ...]` under `y -> x_n`, `z -> x_n - tail/p`.
    pub fn rationalized(&self) -> Result<(PresentedRing, Vec<SeqElement>)> {
        let h = self.presentation()?;
        let map = h.rationalization()?;
        let xs = self.parse(&h)?;
        let out = xs
            .iter()
            .map(|x| {
                let image = map.apply(&x.element.change_ring(crate::coeffs::BaseRing::Rational)?)?;
                Ok(SeqElement { element: image, degree: x.degree })
            })
            .collect::<Result<_>>()?;
        Ok((map.target().as_ref().clone(), out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum SequenceSource {
    Rational(RationalSequence),
    Local(LocalSequence),
}

impl SequenceSource {
    pub fn prime(&self) -> Option<u64> {
        match self {
            SequenceSource::Rational(_) => None,
            SequenceSource::Local(s) => Some(s.prime),
        }
    }

    /// The sequence read in `Q[x2, x3, ...]`.
    pub fn rational_view(&self) -> Result<(PresentedRing, Vec<SeqElement>)> {
        match self {
            SequenceSource::Rational(s) => {
                let ring = s.ring()?;
                let xs = s.parse(&ring)?;
                Ok((ring, xs))
            }
            SequenceSource::Local(s) => s.rationalized(),
        }
    }
}

/// The ring a certificate is evaluated in; rebuilt from these parameters alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CertificateModel {
    /// `Q[x2, x3, ...]` truncated at `bound`.
    Rational { bound: u32 },
    /// `Z_(p)[x2, ..., x_{n-1}, u_n]` truncated at `4n`.
    BelowCritical { prime: u64, index: u32 },
    /// The presentation `T/(r)` truncated at `2(p + p^2)`.
    Critical { prime: u64, tail: String },
}

/// A model ring, its evaluation into tmf, and the sequence transported into it.
pub struct BuiltModel {
    pub ring: Arc<PresentedRing>,
    pub tmf: RingMap,
    pub sequence: Vec<SeqElement>,
}

impl BuiltModel {
    pub fn tower(&self) -> Result<QuotientTower> {
        let spec = SequenceSpec::Finite(self.sequence.clone());
        quotient_by_sequence(&ring_module(&self.ring)?, &spec, OrderPolicy::Sort)
    }

    pub fn parse_witness(&self, expr: &str) -> Result<RingElement> {
        self.ring.parse(expr)
    }
}

/// Move elements of degree `<= bound` between rings sharing generator names.
fn transfer(from: &PresentedRing, to: &PresentedRing, xs: &[SeqElement]) -> Result<Vec<SeqElement>> {
    xs.iter()
        .filter(|x| x.degree <= to.truncation())
        .map(|x| {
            let element = if x.is_zero() { RingElement::zero() } else { to.parse(&from.format(&x.element))? };
            Ok(SeqElement { element, degree: x.degree })
        })
        .collect()
}

impl CertificateModel {
    pub fn prime(&self) -> Option<u64> {
        match self {
            CertificateModel::Rational { .. } => None,
            CertificateModel::BelowCritical { prime, .. } | CertificateModel::Critical { prime, .. } => Some(*prime),
        }
    }

    pub fn build(&self, source: &SequenceSource) -> Result<BuiltModel> {
        match (self, source) {
            (CertificateModel::Rational { bound }, _) => {
                let ring = Arc::new(mo8_rational(*bound)?);
                let (view, xs) = source.rational_view()?;
                let sequence = transfer(&view, &ring, &xs)?;
                let tmf = tmf_model(ring.base(), *bound)?.evaluation(ring.clone())?;
                Ok(BuiltModel { ring, tmf, sequence })
            }
            (CertificateModel::BelowCritical { prime, index }, SequenceSource::Local(s)) if *prime == s.prime => {
                let n = *index;
                let bound = 4 * n;
                if bound > s.bound {
                    return Err(Error::InvalidModel(format!("degree {bound} above the sequence bound {}", s.bound)));
                }
                let h = s.presentation()?;
                let ring = Arc::new(mo8_case1_model(*prime, n, bound)?);
                let source_ring = Arc::new(h.ring.truncated(bound)?);
                let images = (0..source_ring.ngens())
                    .map(|i| if i < ring.ngens() { ring.generator(i) } else { RingElement::zero() })
                    .collect();
                let map = RingMap::new(source_ring, ring.clone(), images)?;
                let sequence = s
                    .parse(&h)?
                    .into_iter()
                    .filter(|x| x.degree <= bound)
                    .map(|x| Ok(SeqElement { element: map.apply(&x.element)?, degree: x.degree }))
                    .collect::<Result<_>>()?;
                let tmf = tmf_model(ring.base(), bound)?.evaluation(ring.clone())?;
                Ok(BuiltModel { ring, tmf, sequence })
            }
            (CertificateModel::Critical { prime, tail }, SequenceSource::Local(s))
                if *prime == s.prime && *tail == s.tail && s.bound == critical_degree(s.prime) =>
            {
                let h = s.presentation()?;
                let sequence = s.parse(&h)?;
                let tmf = h.tmf_evaluation()?;
                Ok(BuiltModel { ring: h.ring.clone(), tmf, sequence })
            }
            _ => Err(Error::InvalidModel(format!("model {self:?} does not fit the sequence source"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sequences() {
        let s = LocalSequence::canonical(5, 60);
        assert_eq!(s.elements.len(), 12);
        assert_eq!(s.elements.last().unwrap(), "y15");
        assert_eq!(LocalSequence::canonical(5, 24).elements, vec!["x4", "x5", "x6"]);
    }

    #[test]
    fn rational_view_of_local_sequence() {
        let mut s = LocalSequence::canonical(5, 60);
        s.tail = "5*x2*x13".into();
        *s.elements.last_mut().unwrap() = "z15 - y15".into();
        let (ring, xs) = s.rationalized().unwrap();
        assert_eq!(ring.format(&xs[11].element), "-x2*x13");
    }

    #[test]
    fn models_build() {
        let source = SequenceSource::Local(LocalSequence { elements: vec!["x4".into(), "5*x5".into()], ..LocalSequence::canonical(5, 60) });
        let below = CertificateModel::BelowCritical { prime: 5, index: 5 }.build(&source).unwrap();
        assert_eq!(below.ring.format(&below.sequence[1].element), "5*u5");
        let rational = CertificateModel::Rational { bound: 18 }.build(&source).unwrap();
        assert_eq!(rational.sequence.len(), 1);
        let critical = CertificateModel::Critical { prime: 5, tail: "0".into() }.build(&source).unwrap();
        assert_eq!(critical.sequence.len(), 2);
        assert!(CertificateModel::Critical { prime: 7, tail: "0".into() }.build(&source).is_err());
    }
}
