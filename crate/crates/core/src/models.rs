//! Builders for the rings being compared: `MO<8>` rationally and p-locally,
//! `tmf` with its evaluation map, and the small `MSpin` example.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::coeffs::{BaseRing, InvariantFactorProfile, Scalar};
use crate::error::{Error, Result};
use crate::graded::{Generator, PresentedRing, RingElement, RingMap};

/// Torsion degree `2(p + p^2)` of the Hovey presentation.
pub fn critical_degree(p: u64) -> u32 {
    u32::try_from(2 * (p + p * p)).expect("prime too large")
}

/// Index `n` with `4n = 2(p + p^2)`.
pub fn critical_index(p: u64) -> u32 {
    critical_degree(p) / 4
}

fn check_prime(p: u64) -> Result<()> {
    BaseRing::local(p).map(|_| ())
}

fn check_bound(d: u32, min: u32) -> Result<()> {
    if d < min || d % 2 != 0 {
        return Err(Error::InvalidModel(format!("degree bound {d} must be even and at least {min}")));
    }
    Ok(())
}

fn x_generators(from: u32, to: u32) -> Vec<Generator> {
    (from..=to).map(|i| Generator::new(format!("x{i}"), 4 * i)).collect()
}

/// `Q[x2, x3, ...]` with one generator in each degree `4n >= 8` up to `D`.
pub fn mo8_rational(bound: u32) -> Result<PresentedRing> {
    check_bound(bound, 8)?;
    PresentedRing::polynomial(BaseRing::Rational, x_generators(2, bound / 4), bound)
}

/// Polynomial ring on `c4` (degree 8) and `c6` (degree 12).
#[derive(Clone, Debug)]
pub struct TmfModel {
    pub ring: Arc<PresentedRing>,
}

pub fn tmf_model(base: BaseRing, bound: u32) -> Result<TmfModel> {
    if base.is_field() && base != BaseRing::Rational {
        return Err(Error::InvalidModel(format!("no tmf model over {base}")));
    }
    let gens = vec![Generator::new("c4", 8), Generator::new("c6", 12)];
    Ok(TmfModel { ring: Arc::new(PresentedRing::polynomial(base, gens, bound)?) })
}

impl TmfModel {
    /// Sum of every monomial `c4^a c6^b` of the given degree.
    pub fn full_sum(&self, degree: u32) -> Result<RingElement> {
        let r = &self.ring;
        if degree > r.truncation() {
            return Ok(RingElement::zero());
        }
        Ok(RingElement::from_terms(r.monomials_of_degree(degree)?.into_iter().map(|m| (m, r.base().one()))))
    }

    /// Image of a degree-`4k` generator: `c4`, `c6`, or the full monomial sum.
    fn standard_image(&self, degree: u32) -> Result<RingElement> {
        match degree {
            8 => Ok(self.ring.generator(0)),
            12 => Ok(self.ring.generator(1)),
            d => self.full_sum(d),
        }
    }

    /// Evaluation map from a polynomial model, each generator sent by degree.
    pub fn evaluation(&self, source: Arc<PresentedRing>) -> Result<RingMap> {
        let images = source.generators().iter().map(|g| self.standard_image(g.degree)).collect::<Result<_>>()?;
        RingMap::new(source, self.ring.clone(), images)
    }

    /// Write a tmf element back as a polynomial in the degree-8 and degree-12
    /// generators of `source` (assumed to be the first two).
    pub fn pull_back(&self, source: &PresentedRing, e: &RingElement) -> Result<RingElement> {
        if source.ngens() < 2 || source.degrees()[..2] != [8, 12] {
            return Err(Error::InvalidModel("source lacks degree-8 and degree-12 generators".into()));
        }
        let n = source.ngens();
        Ok(RingElement::from_terms(e.terms().map(|(m, c)| {
            let mut exps = vec![0; n];
            exps[0] = m.exponents()[0];
            exps[1] = m.exponents()[1];
            (crate::graded::Monomial(exps), c.clone())
        })))
    }
}

/// Degrees `2(p^i + p^j) <= D` with `0 < i < j`.
pub fn hovey_torsion_degrees(p: u64, bound: u32) -> Result<BTreeSet<u32>> {
    check_prime(p)?;
    let mut out = BTreeSet::new();
    let bound = u64::from(bound);
    let mut pi = p;
    while 2 * (pi + pi * p) <= bound {
        let mut pj = pi * p;
        while 2 * (pi + pj) <= bound {
            out.insert((2 * (pi + pj)) as u32);
            pj *= p;
        }
        pi *= p;
    }
    Ok(out)
}

/// Indecomposables of p-local `MO<8>` in degree `4n`.
pub fn mo8_indecomposable_profile(p: u64, degree: u32) -> Result<InvariantFactorProfile> {
    check_prime(p)?;
    if degree < 8 || degree % 4 != 0 {
        return Err(Error::InvalidModel(format!("no indecomposable generator in degree {degree}")));
    }
    let torsion = hovey_torsion_degrees(p, degree)?.contains(&degree);
    Ok(InvariantFactorProfile { free_rank: 1, torsion: if torsion { vec![p] } else { Vec::new() } })
}

/// The p-local model `Z_(p)[x2, ..., x_{n-1}, y_n, z_n] / (p(z_n - y_n) + tail)`, `4n = 2(p + p^2)`.
#[derive(Clone, Debug)]
pub struct HoveyPresentation {
    pub prime: u64,
    pub critical_index: u32,
    pub ring: Arc<PresentedRing>,
    pub tail: RingElement,
    pub relation: RingElement,
}

impl HoveyPresentation {
    /// The polynomial ring before the relation; use it to write tails.
    pub fn free_ring(p: u64, bound: u32) -> Result<PresentedRing> {
        check_prime(p)?;
        let n = critical_index(p);
        let mut gens = x_generators(2, n - 1);
        gens.push(Generator::new(format!("y{n}"), 4 * n));
        gens.push(Generator::new(format!("z{n}"), 4 * n));
        PresentedRing::polynomial(BaseRing::local(p)?, gens, bound)
    }

    pub fn degree(&self) -> u32 {
        4 * self.critical_index
    }

    pub fn y(&self) -> RingElement {
        self.ring.generator(self.ring.ngens() - 2)
    }

    pub fn z(&self) -> RingElement {
        self.ring.generator(self.ring.ngens() - 1)
    }

    /// Evaluation into p-local tmf: the standard images, with `z` adjusted so the relation maps to zero.
    pub fn tmf_evaluation(&self) -> Result<RingMap> {
        let tmf = tmf_model(self.ring.base(), self.ring.truncation())?;
        let r = &self.ring;
        let mut images = Vec::with_capacity(r.ngens());
        for g in &r.generators()[..r.ngens() - 1] {
            images.push(tmf.standard_image(g.degree)?);
        }
        let zero_tail = RingMap::new(
            Arc::new(PresentedRing::polynomial(r.base(), r.generators().to_vec(), r.truncation())?),
            tmf.ring.clone(),
            images.iter().cloned().chain([RingElement::zero()]).collect(),
        )?;
        let tail_image = zero_tail.apply(&self.tail)?;
        let p = Scalar::from_int(BaseRing::Rational, self.prime as i64);
        let mut shifted = RingElement::zero();
        for (m, c) in tail_image.terms() {
            let q = Scalar::from_rational(BaseRing::Rational, c.value() / p.value())?;
            let local = q.change_ring(r.base()).map_err(|_| {
                Error::Consistency(format!(
                    "tail {} has tmf image not divisible by {}; no integral evaluation exists",
                    r.format(&self.tail),
                    self.prime
                ))
            })?;
            shifted.add_term(m.clone(), local);
        }
        let y_image = images.last().cloned().unwrap_or_default();
        images.push(y_image.sub(&shifted));
        RingMap::new(r.clone(), tmf.ring, images)
    }

    /// Map to `Q[x2, ...]`: `y -> x_n`, `z -> x_n - tail/p`.
    pub fn rationalization(&self) -> Result<RingMap> {
        let source = Arc::new(self.ring.rationalized()?);
        let target = Arc::new(mo8_rational(self.ring.truncation())?);
        let n = self.critical_index as usize;
        let top = target.generator_named(&format!("x{n}")).unwrap_or_default();
        let tail_q = self.tail.change_ring(BaseRing::Rational)?;
        // Same exponent layout on x2..x_{n-1}; pad for the target's extra generators.
        let pad = |e: &RingElement| {
            RingElement::from_terms(e.terms().map(|(m, c)| {
                let mut exps = m.exponents()[..n - 2].to_vec();
                exps.resize(target.ngens(), 0);
                (crate::graded::Monomial(exps), c.clone())
            }))
        };
        let inv_p = Scalar::from_ratio(BaseRing::Rational, 1.into(), (self.prime as i64).into())?;
        let images = (0..source.ngens())
            .map(|i| match source.generators()[i].name.as_str() {
                _ if source.generators()[i].degree > target.truncation() => Ok(RingElement::zero()),
                name if name.starts_with('y') => Ok(top.clone()),
                name if name.starts_with('z') => Ok(top.sub(&pad(&tail_q).scale(&inv_p))),
                name => target.generator_named(name),
            })
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(source, target, images)
    }
}

/// Build the presentation truncated at `D <= 2(p + p^2)`; `tail` must be decomposable of degree `2(p + p^2)`.
pub fn mo8_local_presentation(p: u64, bound: u32, tail: Option<RingElement>) -> Result<HoveyPresentation> {
    check_prime(p)?;
    check_bound(bound, 8)?;
    let top = critical_degree(p);
    if bound > top {
        return Err(Error::InvalidModel(format!(
            "presentation is only pinned down through degree {top}; asked for {bound}"
        )));
    }
    let free = HoveyPresentation::free_ring(p, top)?;
    let tail = tail.unwrap_or_default();
    match free.homogeneous_degree(&tail)? {
        None => {}
        Some(d) if d == top && tail.is_decomposable() => {}
        Some(d) => {
            return Err(Error::InvalidModel(format!(
                "tail {} must be decomposable of degree {top} (got degree {d})",
                free.format(&tail)
            )))
        }
    }
    let n = critical_index(p);
    let relation = free.parse(&format!("{p}*z{n} - {p}*y{n}"))?.add(&tail);
    let relations = if bound >= top { vec![relation.clone()] } else { Vec::new() };
    let ring = PresentedRing::new(free.base(), free.generators().to_vec(), relations, bound)?;
    Ok(HoveyPresentation { prime: p, critical_index: n, ring: Arc::new(ring), tail, relation })
}

/// `Z_(p)[x2, ..., x_{n-1}, u_n]` truncated at `D <= 4n`, valid for `4n < 2(p + p^2)`.
pub fn mo8_case1_model(p: u64, n: u32, bound: u32) -> Result<PresentedRing> {
    check_prime(p)?;
    if n < 4 || 4 * n >= critical_degree(p) {
        return Err(Error::InvalidModel(format!(
            "degree {} is not below the torsion degree {}",
            4 * n,
            critical_degree(p)
        )));
    }
    if bound > 4 * n {
        return Err(Error::InvalidModel(format!("bound {bound} exceeds {}", 4 * n)));
    }
    check_bound(bound, 8)?;
    let mut gens = x_generators(2, n - 1);
    gens.push(Generator::new(format!("u{n}"), 4 * n));
    PresentedRing::polynomial(BaseRing::local(p)?, gens, bound)
}

/// A genus `Q[m1, m2, ...] -> Q[delta, epsilon]` and a regular sequence generating its kernel.
#[derive(Clone, Debug)]
pub struct MSpinDemo {
    pub source: Arc<PresentedRing>,
    pub target: Arc<PresentedRing>,
    pub genus: RingMap,
    pub kernel_sequence: Vec<RingElement>,
}

pub fn mspin_demo(bound: u32) -> Result<MSpinDemo> {
    check_bound(bound, 8)?;
    if bound > 32 {
        return Err(Error::InvalidModel(format!("demo bound {bound} above 32")));
    }
    let q = BaseRing::Rational;
    let source = Arc::new(PresentedRing::polynomial(
        q,
        (1..=bound / 4).map(|k| Generator::new(format!("m{k}"), 4 * k)).collect(),
        bound,
    )?);
    let target = Arc::new(PresentedRing::polynomial(
        q,
        vec![Generator::new("delta", 4), Generator::new("epsilon", 8)],
        bound,
    )?);
    let mut images = vec![target.parse("delta")?, target.parse("epsilon")?];
    for k in 3..=bound / 4 {
        images.push(target.parse(&format!("delta^{}*epsilon", k - 2))?);
    }
    let genus = RingMap::new(source.clone(), target.clone(), images)?;
    let kernel_sequence =
        (3..=bound / 4).map(|k| source.parse(&format!("m{k} - m1^{}*m2", k - 2))).collect::<Result<_>>()?;
    Ok(MSpinDemo { source, target, genus, kernel_sequence })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn below_critical_models_match_the_presentation() {
        let h = mo8_local_presentation(5, 56, None).unwrap();
        for n in [4, 9, 14] {
            let m = mo8_case1_model(5, n, 4 * n).unwrap();
            for d in (0..=4 * n).step_by(4) {
                assert_eq!(m.profile(d).unwrap(), h.ring.profile(d).unwrap(), "n {n}, degree {d}");
                assert!(h.ring.profile(d).unwrap().torsion.is_empty());
            }
        }
    }

    #[test]
    fn rational_model() {
        let r = mo8_rational(16).unwrap();
        assert_eq!(r.degrees(), &[8, 12, 16]);
        assert_eq!(r.dimension(16).unwrap(), 2);
        assert_eq!(mo8_rational(8).unwrap().dimension(8).unwrap(), 1);
        assert!(mo8_rational(6).is_err());
    }

    #[test]
    fn tmf_models() {
        let q = tmf_model(BaseRing::Rational, 24).unwrap();
        assert_eq!(q.ring.dimension(24).unwrap(), 2);
        let q4 = tmf_model(BaseRing::Rational, 4).unwrap();
        assert_eq!(q4.ring.dimension(4).unwrap(), 0);
        let z = tmf_model(BaseRing::Local(5), 20).unwrap();
        assert_eq!(z.ring.profile(20).unwrap(), InvariantFactorProfile::free(1));
        assert!(tmf_model(BaseRing::PrimeField(5), 20).is_err());
    }

    #[test]
    fn torsion_degrees() {
        assert_eq!(hovey_torsion_degrees(5, 200).unwrap().into_iter().collect::<Vec<_>>(), vec![60]);
        assert!(hovey_torsion_degrees(5, 20).unwrap().is_empty());
        assert_eq!(hovey_torsion_degrees(7, 120).unwrap().into_iter().collect::<Vec<_>>(), vec![112]);
        // 2(5 + 125) and 2(25 + 125) next.
        assert_eq!(hovey_torsion_degrees(5, 300).unwrap().into_iter().collect::<Vec<_>>(), vec![60, 260, 300]);
    }

    #[test]
    fn indecomposable_profiles() {
        let torsion = InvariantFactorProfile { free_rank: 1, torsion: vec![5] };
        assert_eq!(mo8_indecomposable_profile(5, 60).unwrap(), torsion);
        assert_eq!(mo8_indecomposable_profile(5, 16).unwrap(), InvariantFactorProfile::free(1));
        assert_eq!(mo8_indecomposable_profile(7, 112).unwrap().torsion, vec![7]);
        assert!(mo8_indecomposable_profile(5, 4).is_err());
        assert!(mo8_indecomposable_profile(5, 18).is_err());
    }

    #[test]
    fn local_presentation_p5() {
        let h = mo8_local_presentation(5, 60, None).unwrap();
        let names: Vec<_> = h.ring.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names.first(), Some(&"x2"));
        assert_eq!(&names[names.len() - 3..], &["x14", "y15", "z15"]);
        assert_eq!(h.ring.format(&h.relation), "-5*y15 + 5*z15");
        assert_eq!(h.ring.indecomposable_quotient(60).unwrap(), InvariantFactorProfile { free_rank: 1, torsion: vec![5] });
        assert_eq!(h.ring.indecomposable_quotient(16).unwrap(), InvariantFactorProfile::free(1));
        assert!(mo8_local_presentation(5, 64, None).is_err());
        let free = HoveyPresentation::free_ring(5, 60).unwrap();
        assert!(mo8_local_presentation(5, 60, Some(free.parse("x2*x3").unwrap())).is_err());
        assert!(mo8_local_presentation(5, 60, Some(free.parse("y15").unwrap())).is_err());
        assert!(mo8_local_presentation(5, 60, Some(free.parse("x2*x13").unwrap())).is_ok());
    }

    #[test]
    fn evaluation_kills_relation() {
        let free = HoveyPresentation::free_ring(5, 60).unwrap();
        let h = mo8_local_presentation(5, 60, Some(free.parse("5*x2*x13 + 10*x5*x10").unwrap())).unwrap();
        let phi = h.tmf_evaluation().unwrap();
        assert!(phi.apply(&h.relation).unwrap().is_zero());
        let bad = mo8_local_presentation(5, 60, Some(free.parse("x2*x13").unwrap())).unwrap();
        assert!(matches!(bad.tmf_evaluation(), Err(Error::Consistency(_))));
        let rat = bad.rationalization().unwrap();
        let q = rat.apply(&bad.relation.change_ring(BaseRing::Rational).unwrap()).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn case1_model() {
        let r = mo8_case1_model(5, 4, 16).unwrap();
        assert_eq!(r.degrees(), &[8, 12, 16]);
        assert_eq!(r.profile(16).unwrap(), InvariantFactorProfile::free(2));
        assert_eq!(r.profile(12).unwrap(), InvariantFactorProfile::free(1));
        assert!(mo8_case1_model(5, 15, 60).is_err());
    }

    #[test]
    fn mspin() {
        let demo = mspin_demo(24).unwrap();
        assert_eq!(demo.target.dimension(8).unwrap(), 2);
        for x in &demo.kernel_sequence {
            assert!(demo.genus.apply(x).unwrap().is_zero());
        }
        assert!(demo.genus.is_surjective_in(20).unwrap());
        assert!(mspin_demo(36).is_err());
    }
}
