use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::element::{Monomial, RingElement};
use crate::coeffs::{BaseRing, InvariantFactorProfile, Lattice, Matrix, Scalar, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree }
    }
}

/// Monomial basis of one degree, with a reverse index.
#[derive(Debug)]
pub struct DegreeBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Result of a product in a truncated ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub value: RingElement,
    /// Some component above the truncation degree was discarded.
    pub truncated: bool,
}

/// Degree-`d` component as a cokernel: monomial basis modulo relation multiples.
#[derive(Clone, Debug)]
pub struct DegreePiece {
    pub degree: u32,
    pub basis: Arc<DegreeBasis>,
    pub relation_columns: Vec<SparseVec>,
}

impl DegreePiece {
    pub fn matrix(&self, ring: BaseRing) -> Matrix {
        Matrix::from_columns(ring, self.basis.len(), &self.relation_columns)
    }

    pub fn relation_lattice(&self, ring: BaseRing) -> Lattice {
        Lattice::spanned_by(ring, self.basis.len(), self.relation_columns.iter().cloned())
    }

    pub fn profile(&self, ring: BaseRing) -> InvariantFactorProfile {
        self.relation_lattice(ring).quotient_profile()
    }
}

/// Invariant-factor profile for each degree `0..=D`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile(pub BTreeMap<u32, InvariantFactorProfile>);

impl DegreeProfile {
    pub fn get(&self, k: u32) -> InvariantFactorProfile {
        self.0.get(&k).cloned().unwrap_or_default()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.0.keys().next_back().copied()
    }

    /// Same profiles in every degree `<= bound` (absent degrees count as zero).
    pub fn agrees_through(&self, other: &DegreeProfile, bound: u32) -> bool {
        (0..=bound).all(|k| self.get(k) == other.get(k))
    }

    /// Free ranks as a dimension sequence.
    pub fn free_ranks(&self) -> Vec<usize> {
        match self.max_degree() {
            Some(top) => (0..=top).map(|k| self.get(k).free_rank).collect(),
            None => Vec::new(),
        }
    }
}

/// A finitely presented commutative graded ring in even degrees, truncated at `D`.
#[derive(Clone)]
pub struct PresentedRing {
    base: BaseRing,
    generators: Vec<Generator>,
    degrees: Vec<u32>,
    relations: Vec<RingElement>,
    truncation: u32,
    bases: Vec<OnceLock<Arc<DegreeBasis>>>,
}

impl fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PresentedRing")
            .field("base", &self.base)
            .field("generators", &self.generators)
            .field("relations", &self.relations.iter().map(|r| self.format(r)).collect::<Vec<_>>())
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl PartialEq for PresentedRing {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.generators == other.generators
            && self.relations == other.relations
            && self.truncation == other.truncation
    }
}

impl Eq for PresentedRing {}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PresentedRing {
    pub fn new(
        base: BaseRing,
        generators: Vec<Generator>,
        relations: Vec<RingElement>,
        truncation: u32,
    ) -> Result<Self> {
        base.validate()?;
        if truncation == 0 || truncation % 2 != 0 {
            return Err(Error::InvalidRing(format!("truncation {truncation} must be positive and even")));
        }
        let mut seen = HashSet::new();
        for g in &generators {
            if !is_identifier(&g.name) {
                return Err(Error::InvalidRing(format!("generator name {:?} is not an identifier", g.name)));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate generator {}", g.name)));
            }
            if g.degree == 0 || g.degree % 2 != 0 {
                return Err(Error::InvalidRing(format!("generator {} has degree {}; need positive even", g.name, g.degree)));
            }
        }
        let degrees = generators.iter().map(|g| g.degree).collect();
        let mut ring = PresentedRing {
            base,
            generators,
            degrees,
            relations: Vec::new(),
            truncation,
            bases: (0..=truncation).map(|_| OnceLock::new()).collect(),
        };
        for r in &relations {
            match ring.homogeneous_degree(r)? {
                Some(d) if d > truncation => {
                    return Err(Error::InvalidRing(format!(
                        "relation {} has degree {d} above truncation {truncation}",
                        ring.format(r)
                    )))
                }
                _ => {}
            }
        }
        ring.relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(ring)
    }

    pub fn polynomial(base: BaseRing, generators: Vec<Generator>, truncation: u32) -> Result<Self> {
        Self::new(base, generators, Vec::new(), truncation)
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[RingElement] {
        &self.relations
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator(&self, i: usize) -> RingElement {
        RingElement::monomial(Monomial::generator(self.ngens(), i), self.base.one())
    }

    pub fn generator_named(&self, name: &str) -> Result<RingElement> {
        self.generator_index(name)
            .map(|i| self.generator(i))
            .ok_or_else(|| Error::Parse(format!("unknown generator {name}")))
    }

    pub fn one(&self) -> RingElement {
        RingElement::constant(self.base.one(), self.ngens())
    }

    pub fn scalar(&self, n: i64) -> RingElement {
        RingElement::constant(Scalar::from_int(self.base, n), self.ngens())
    }

    pub fn monomial_element(&self, m: Monomial) -> RingElement {
        RingElement::monomial(m, self.base.one())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.degree(&self.degrees)
    }

    /// Checks that `e` belongs to this ring.
    pub fn check(&self, e: &RingElement) -> Result<()> {
        e.check_shape(self.ngens(), self.base)
    }

    /// `Some(d)` for a nonzero homogeneous element of degree `d`, `None` for zero.
    pub fn homogeneous_degree(&self, e: &RingElement) -> Result<Option<u32>> {
        self.check(e)?;
        let mut degs = e.terms().map(|(m, _)| self.monomial_degree(m));
        let Some(d) = degs.next() else { return Ok(None) };
        if degs.any(|k| k != d) {
            return Err(Error::Inhomogeneous(self.format(e)));
        }
        Ok(Some(d))
    }

    /// Split an element into homogeneous components.
    pub fn components(&self, e: &RingElement) -> BTreeMap<u32, RingElement> {
        let mut out: BTreeMap<u32, RingElement> = BTreeMap::new();
        for (m, c) in e.terms() {
            out.entry(self.monomial_degree(m)).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.truncation {
            return Err(Error::DegreeOutOfRange { degree: d, bound: self.truncation });
        }
        Ok(())
    }

    /// Monomial basis of degree `d`, enumerated once and cached.
    pub fn basis(&self, d: u32) -> Result<Arc<DegreeBasis>> {
        self.check_degree(d)?;
        Ok(self.bases[d as usize]
            .get_or_init(|| {
                let monomials = enumerate_monomials(&self.degrees, d);
                let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                Arc::new(DegreeBasis { monomials, index })
            })
            .clone())
    }

    /// All exponent vectors of weighted degree exactly `d`, graded-lex ordered.
    pub fn monomials_of_degree(&self, d: u32) -> Result<Vec<Monomial>> {
        Ok(self.basis(d)?.monomials.clone())
    }

    pub fn dimension(&self, d: u32) -> Result<usize> {
        Ok(self.basis(d)?.len())
    }

    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> Result<Product> {
        self.check(a)?;
        self.check(b)?;
        let mut value = RingElement::zero();
        let mut truncated = false;
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let m = ma.mul(mb);
                if self.monomial_degree(&m) > self.truncation {
                    truncated = true;
                    continue;
                }
                value.add_term(m, ca * cb);
            }
        }
        Ok(Product { value, truncated })
    }

    /// Product with components above `D` silently dropped.
    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut value = RingElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let m = ma.mul(mb);
                if self.monomial_degree(&m) <= self.truncation {
                    value.add_term(m, ca * cb);
                }
            }
        }
        value
    }

    pub fn pow(&self, e: &RingElement, k: u32) -> RingElement {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, e))
    }

    /// Coordinates of a degree-`d` homogeneous element in the monomial basis.
    pub fn to_vector(&self, e: &RingElement, d: u32) -> Result<SparseVec> {
        let basis = self.basis(d)?;
        let mut entries = Vec::with_capacity(e.num_terms());
        for (m, c) in e.terms() {
            let i = basis.index_of(m).ok_or_else(|| {
                Error::Inhomogeneous(format!("{} has a term outside degree {d}", self.format(e)))
            })?;
            entries.push((i, c.clone()));
        }
        Ok(SparseVec::from_entries(entries))
    }

    pub fn from_vector(&self, v: &SparseVec, d: u32) -> Result<RingElement> {
        let basis = self.basis(d)?;
        let mut out = RingElement::zero();
        for (i, c) in v.iter() {
            let m = basis.monomials.get(i).ok_or_else(|| Error::Dimension(format!("index {i} in degree {d}")))?;
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Columns `m * g` for every monomial `m` with `deg(m * g) = d`.
    pub fn multiples_in_degree(&self, gens: &[RingElement], d: u32) -> Result<Vec<SparseVec>> {
        let basis = self.basis(d)?;
        let mut cols = Vec::new();
        for g in gens {
            let Some(dg) = self.homogeneous_degree(g)? else { continue };
            if dg > d {
                continue;
            }
            for m in self.basis(d - dg)?.monomials() {
                let entries = g.terms().map(|(mg, c)| (basis.index[&mg.mul(m)], c.clone()));
                cols.push(SparseVec::from_entries(entries));
            }
        }
        Ok(cols)
    }

    pub fn degree_piece(&self, d: u32) -> Result<DegreePiece> {
        Ok(DegreePiece { degree: d, basis: self.basis(d)?, relation_columns: self.multiples_in_degree(&self.relations, d)? })
    }

    pub fn profile(&self, d: u32) -> Result<InvariantFactorProfile> {
        Ok(self.degree_piece(d)?.profile(self.base))
    }

    pub fn degree_profile(&self) -> Result<DegreeProfile> {
        (0..=self.truncation).map(|k| Ok((k, self.profile(k)?))).collect::<Result<_>>().map(DegreeProfile)
    }

    /// Profile of the degree-`d` part of `Aug / Aug^2`.
    pub fn indecomposable_quotient(&self, d: u32) -> Result<InvariantFactorProfile> {
        if d == 0 {
            return Err(Error::DegreeOutOfRange { degree: 0, bound: self.truncation });
        }
        Ok(self.indecomposable_lattice(d, &[])?.quotient_profile())
    }

    /// Span of decomposables, relation multiples and `extra` in degree `d`.
    pub(crate) fn indecomposable_lattice(&self, d: u32, extra: &[RingElement]) -> Result<Lattice> {
        let piece = self.degree_piece(d)?;
        let mut lattice = piece.relation_lattice(self.base);
        for (i, m) in piece.basis.monomials().iter().enumerate() {
            if m.total_exponent() >= 2 {
                lattice.insert(SparseVec::unit(self.base, i));
            }
        }
        for e in extra {
            lattice.insert(self.to_vector(e, d)?);
        }
        Ok(lattice)
    }

    /// Same generators and relations over another base ring.
    pub fn change_base(&self, base: BaseRing) -> Result<PresentedRing> {
        let relations = self.relations.iter().map(|r| r.change_ring(base)).collect::<Result<_>>()?;
        PresentedRing::new(base, self.generators.clone(), relations, self.truncation)
    }

    /// Base change `Z_(p) -> Q`.
    pub fn rationalized(&self) -> Result<PresentedRing> {
        match self.base.rationalized() {
            Some(q) => self.change_base(q),
            None => Err(Error::InvalidRing(format!("{} has no rationalization", self.base))),
        }
    }

    /// Same ring, reading only degrees `<= bound`.
    pub fn truncated(&self, bound: u32) -> Result<PresentedRing> {
        let relations = self
            .relations
            .iter()
            .filter(|r| self.homogeneous_degree(r).ok().flatten().is_some_and(|d| d <= bound))
            .cloned()
            .collect();
        PresentedRing::new(self.base, self.generators.clone(), relations, bound)
    }

    /// Reorder generators: position `i` of the result is generator `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<PresentedRing> {
        if order.len() != self.ngens() || order.iter().collect::<HashSet<_>>().len() != order.len() {
            return Err(Error::InvalidRing("not a permutation of the generators".into()));
        }
        let gens = order.iter().map(|&i| self.generators[i].clone()).collect();
        let relations = self.relations.iter().map(|r| permute_element(r, order)).collect();
        PresentedRing::new(self.base, gens, relations, self.truncation)
    }
}

pub(crate) fn permute_element(e: &RingElement, order: &[usize]) -> RingElement {
    RingElement::from_terms(
        e.terms().map(|(m, c)| (Monomial(order.iter().map(|&i| m.exponents()[i]).collect()), c.clone())),
    )
}

/// Exponent vectors of weighted degree `d`, first generator's exponent descending.
fn enumerate_monomials(degrees: &[u32], d: u32) -> Vec<Monomial> {
    fn go(degrees: &[u32], pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos == degrees.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = degrees[pos];
        for e in (0..=left / g).rev() {
            cur[pos] = e;
            go(degrees, pos + 1, left - e * g, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    go(degrees, 0, d, &mut vec![0; degrees.len()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x2x3(base: BaseRing, d: u32) -> PresentedRing {
        PresentedRing::polynomial(base, vec![Generator::new("x2", 8), Generator::new("x3", 12)], d).unwrap()
    }

    #[test]
    fn monomials_of_degree_examples() {
        let r = x2x3(BaseRing::Rational, 24);
        assert_eq!(r.monomials_of_degree(24).unwrap(), vec![Monomial(vec![3, 0]), Monomial(vec![0, 2])]);
        assert!(r.monomials_of_degree(4).unwrap().is_empty());
        assert_eq!(r.monomials_of_degree(0).unwrap(), vec![Monomial(vec![0, 0])]);
        assert!(matches!(r.monomials_of_degree(26), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn multiply_examples() {
        let r = x2x3(BaseRing::Rational, 24);
        let (a, b) = (r.generator(0), r.generator(1));
        let p = r.multiply(&a, &b).unwrap();
        assert_eq!(p.value, RingElement::monomial(Monomial(vec![1, 1]), r.base().one()));
        assert!(!p.truncated);
        let s = r.multiply(&a.add(&b), &a).unwrap().value;
        assert_eq!(r.format(&s), "x2^2 + x2*x3");
        let big = r.multiply(&b, &r.multiply(&b, &b).unwrap().value).unwrap();
        assert!(big.truncated && big.value.is_zero());
    }

    #[test]
    fn mixed_rings_rejected() {
        let q = x2x3(BaseRing::Rational, 24);
        let z = x2x3(BaseRing::Local(5), 24);
        assert!(matches!(q.multiply(&q.generator(0), &z.generator(0)), Err(Error::MixedRings(..))));
        let three = PresentedRing::polynomial(
            BaseRing::Rational,
            vec![Generator::new("a", 4), Generator::new("b", 4), Generator::new("c", 4)],
            8,
        )
        .unwrap();
        assert!(q.multiply(&q.generator(0), &three.generator(0)).is_err());
    }

    #[test]
    fn degree_piece_examples() {
        let r = x2x3(BaseRing::Rational, 40);
        for d in [0, 8, 24, 36] {
            let piece = r.degree_piece(d).unwrap();
            assert!(piece.relation_columns.is_empty());
            assert_eq!(r.profile(d).unwrap(), InvariantFactorProfile::free(piece.basis.len()));
        }

        let z5 = BaseRing::Local(5);
        let gens = vec![Generator::new("y", 60), Generator::new("z", 60)];
        let pre = PresentedRing::polynomial(z5, gens.clone(), 60).unwrap();
        let rel = pre.parse("5*z - 5*y").unwrap();
        let ring = PresentedRing::new(z5, gens, vec![rel], 60).unwrap();
        assert_eq!(ring.profile(60).unwrap(), InvariantFactorProfile { free_rank: 1, torsion: vec![5] });

        let x = PresentedRing::polynomial(BaseRing::Rational, vec![Generator::new("x", 4)], 8).unwrap();
        let xq = PresentedRing::new(BaseRing::Rational, x.generators().to_vec(), vec![x.generator(0)], 8).unwrap();
        assert!(xq.profile(4).unwrap().is_zero());
    }

    #[test]
    fn indecomposable_quotient_examples() {
        let r = x2x3(BaseRing::Rational, 16);
        assert!(r.indecomposable_quotient(16).unwrap().is_zero());
        let r = PresentedRing::polynomial(
            BaseRing::Rational,
            vec![Generator::new("x2", 8), Generator::new("x3", 12), Generator::new("x4", 16)],
            16,
        )
        .unwrap();
        assert_eq!(r.indecomposable_quotient(16).unwrap(), InvariantFactorProfile::free(1));
        assert!(r.indecomposable_quotient(0).is_err());

        let z5 = BaseRing::Local(5);
        let gens = vec![Generator::new("y", 60), Generator::new("z", 60)];
        let pre = PresentedRing::polynomial(z5, gens.clone(), 60).unwrap();
        let ring = PresentedRing::new(z5, gens, vec![pre.parse("5*z - 5*y").unwrap()], 60).unwrap();
        assert_eq!(ring.indecomposable_quotient(60).unwrap(), InvariantFactorProfile { free_rank: 1, torsion: vec![5] });
    }

    #[test]
    fn validation() {
        let q = BaseRing::Rational;
        assert!(PresentedRing::polynomial(q, vec![Generator::new("a", 3)], 8).is_err());
        assert!(PresentedRing::polynomial(q, vec![Generator::new("a", 4)], 7).is_err());
        assert!(PresentedRing::polynomial(q, vec![Generator::new("a", 4), Generator::new("a", 8)], 8).is_err());
        let r = PresentedRing::polynomial(q, vec![Generator::new("a", 4), Generator::new("b", 8)], 8).unwrap();
        let inhom = r.parse("a + b").unwrap();
        assert!(matches!(r.homogeneous_degree(&inhom), Err(Error::Inhomogeneous(_))));
        let high = r.parse("a*b").unwrap();
        assert!(PresentedRing::new(q, r.generators().to_vec(), vec![high], 8).is_err());
    }

    #[test]
    fn rationalization_kills_torsion() {
        let z5 = BaseRing::Local(5);
        let gens = vec![Generator::new("a", 4), Generator::new("y", 8), Generator::new("z", 8)];
        let pre = PresentedRing::polynomial(z5, gens.clone(), 16).unwrap();
        let ring = PresentedRing::new(z5, gens, vec![pre.parse("5*z - 5*y + a^2").unwrap()], 16).unwrap();
        let rat = ring.rationalized().unwrap();
        for d in (0..=16).step_by(2) {
            assert_eq!(ring.profile(d).unwrap().rationalized(), rat.profile(d).unwrap());
        }
    }

    /// Coefficient of `t^d` in `prod 1/(1 - t^g)`, by the standard coin-change recurrence.
    fn hilbert_coefficients(degrees: &[u32], top: u32) -> Vec<usize> {
        let mut c = vec![0usize; top as usize + 1];
        c[0] = 1;
        for &g in degrees {
            for k in g as usize..=top as usize {
                c[k] += c[k - g as usize];
            }
        }
        c
    }

    proptest! {
        #[test]
        fn hilbert_series_identity(halves in prop::collection::vec(1u32..=8, 1..5), top in 2u32..=40) {
            let top = top * 2;
            let gens = halves.iter().enumerate().map(|(i, h)| Generator::new(format!("g{i}"), 2 * h)).collect();
            let r = PresentedRing::polynomial(BaseRing::PrimeField(7), gens, top).unwrap();
            let expected = hilbert_coefficients(r.degrees(), top);
            for d in 0..=top {
                prop_assert_eq!(r.dimension(d).unwrap(), expected[d as usize]);
            }
        }

        #[test]
        fn profiles_invariant_under_generator_permutation(
            coeffs in prop::collection::vec(-3i64..=3, 4),
            order in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        ) {
            let z5 = BaseRing::Local(5);
            let gens = vec![Generator::new("a", 4), Generator::new("b", 4), Generator::new("c", 8), Generator::new("e", 8)];
            let pre = PresentedRing::polynomial(z5, gens.clone(), 24).unwrap();
            let rel = pre.parse(&format!(
                "{}*a^2 + {}*a*b + {}*c + 5*e + {}*b^2", coeffs[0], coeffs[1], 5 * coeffs[2], coeffs[3]
            )).unwrap();
            let ring = PresentedRing::new(z5, gens, vec![rel], 24).unwrap();
            let perm = ring.permuted(&order).unwrap();
            for d in (0..=24).step_by(4) {
                prop_assert_eq!(ring.profile(d).unwrap(), perm.profile(d).unwrap());
            }
        }
    }
}
