use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeffs::{BaseRing, InvariantFactorProfile, Lattice, SparseVec};
use crate::error::{Error, Result};
use crate::graded::{DegreeProfile, PresentedRing, RingElement};

/// Where a block of basis vectors came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SummandKind {
    /// The module the tower started from.
    Base,
    /// Shifted copy created when the element of `stage` acted as zero.
    Split { stage: usize },
    /// Shifted kernel of a zerodivisor at `stage` (associated graded).
    Kernel { stage: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub shift: u32,
    #[serde(flatten)]
    pub kind: SummandKind,
}

/// One degree: a free module on labelled basis vectors modulo a relation lattice.
#[derive(Clone, Debug)]
pub struct Piece {
    labels: Vec<String>,
    summands: Vec<usize>,
    relations: Lattice,
}

impl Piece {
    pub fn new(ring: BaseRing, labels: Vec<String>, relations: impl IntoIterator<Item = SparseVec>) -> Self {
        let n = labels.len();
        Piece { summands: vec![0; n], relations: Lattice::spanned_by(ring, n, relations), labels }
    }

    pub(crate) fn from_parts(labels: Vec<String>, summands: Vec<usize>, relations: Lattice) -> Self {
        debug_assert_eq!(labels.len(), relations.dim());
        Piece { labels, summands, relations }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn summand_of(&self, i: usize) -> usize {
        self.summands[i]
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn profile(&self) -> InvariantFactorProfile {
        self.relations.quotient_profile()
    }
}

/// Value of an element acting on the unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub degree: u32,
    pub vanishes: bool,
    /// Reduced representative as `(basis label, coefficient)` pairs.
    pub coordinates: Vec<(String, String)>,
}

/// A connective graded module over a presented ring, degrees `0..=bound`
/// (odd degrees allowed), with generator actions stored per degree.
#[derive(Clone, Debug)]
pub struct GradedModule {
    ring: Arc<PresentedRing>,
    bound: u32,
    pieces: Vec<Piece>,
    /// `actions[g][k][j]` is `g * e_j` for the basis of degree `k`, in degree `k + deg g`.
    actions: Vec<Vec<Vec<SparseVec>>>,
    summands: Vec<Summand>,
}

impl GradedModule {
    /// Validated constructor; checks shapes, relations, commutativity and that ring relations act as zero.
    pub fn new(
        ring: Arc<PresentedRing>,
        bound: u32,
        pieces: Vec<Piece>,
        actions: Vec<Vec<Vec<SparseVec>>>,
    ) -> Result<Self> {
        let summands = vec![Summand { shift: 0, kind: SummandKind::Base }];
        let m = GradedModule { ring, bound, pieces, actions, summands };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        ring: Arc<PresentedRing>,
        bound: u32,
        pieces: Vec<Piece>,
        actions: Vec<Vec<Vec<SparseVec>>>,
        summands: Vec<Summand>,
    ) -> Self {
        GradedModule { ring, bound, pieces, actions, summands }
    }

    /// The ring as a module over itself, degrees `0..=D`.
    pub fn free_ring_module(ring: Arc<PresentedRing>) -> Result<Self> {
        let bound = ring.truncation();
        let base = ring.base();
        let mut pieces = Vec::with_capacity(bound as usize + 1);
        for k in 0..=bound {
            let piece = ring.degree_piece(k)?;
            let labels = piece.basis.monomials().iter().map(|m| ring.format(&ring.monomial_element(m.clone()))).collect();
            pieces.push(Piece::new(base, labels, piece.relation_columns));
        }
        let mut actions = Vec::with_capacity(ring.ngens());
        for (g, &dg) in ring.degrees().iter().enumerate() {
            let mut per_degree = Vec::with_capacity(bound as usize + 1);
            for k in 0..=bound {
                if k + dg > bound {
                    per_degree.push(Vec::new());
                    continue;
                }
                let target = ring.basis(k + dg)?;
                let cols = ring
                    .basis(k)?
                    .monomials()
                    .iter()
                    .map(|m| {
                        let mut e = m.clone();
                        e.0[g] += 1;
                        SparseVec::unit(base, target.index_of(&e).expect("product monomial in basis"))
                    })
                    .collect();
                per_degree.push(cols);
            }
            actions.push(per_degree);
        }
        let summands = vec![Summand { shift: 0, kind: SummandKind::Base }];
        Ok(GradedModule { ring, bound, pieces, actions, summands })
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn base(&self) -> BaseRing {
        self.ring.base()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn piece(&self, k: u32) -> Option<&Piece> {
        self.pieces.get(k as usize)
    }

    pub(crate) fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub(crate) fn actions(&self) -> &[Vec<Vec<SparseVec>>] {
        &self.actions
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn rank(&self, k: u32) -> usize {
        self.piece(k).map_or(0, Piece::rank)
    }

    pub fn profile(&self, k: u32) -> InvariantFactorProfile {
        self.piece(k).map(Piece::profile).unwrap_or_default()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile((0..=self.bound).map(|k| (k, self.profile(k))).collect())
    }

    /// Basis vector 0 in degree 0: the unit of a ring-as-module tower.
    pub fn unit(&self) -> Option<SparseVec> {
        let p = self.piece(0)?;
        (p.rank() > 0 && p.summands[0] == 0).then(|| SparseVec::unit(self.base(), 0))
    }

    /// `g * v` for `v` in degree `k`; zero past the bound.
    pub fn act_generator(&self, g: usize, k: u32, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        let Some(cols) = self.actions[g].get(k as usize) else { return out };
        if cols.is_empty() {
            return out;
        }
        for (j, c) in v.iter() {
            out.add_scaled(c, &cols[j]);
        }
        out
    }

    /// `x * v` for homogeneous `x` and `v` in degree `k`.
    pub fn act(&self, x: &RingElement, k: u32, v: &SparseVec) -> Result<SparseVec> {
        let Some(d) = self.ring.homogeneous_degree(x)? else { return Ok(SparseVec::new()) };
        let mut out = SparseVec::new();
        if k + d > self.bound {
            return Ok(out);
        }
        for (m, c) in x.terms() {
            let mut w = v.clone();
            let mut deg = k;
            for (g, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    w = self.act_generator(g, deg, &w);
                    deg += self.ring.degrees()[g];
                }
            }
            out.add_scaled(c, &w);
        }
        Ok(out)
    }

    /// `w * 1`, reduced modulo relations.
    pub fn evaluate(&self, w: &RingElement) -> Result<Evaluation> {
        let unit = self.unit().ok_or_else(|| Error::InvalidModule("module has no unit class".into()))?;
        let degree = self.ring.homogeneous_degree(w)?.unwrap_or(0);
        if degree > self.bound {
            return Err(Error::DegreeOutOfRange { degree, bound: self.bound });
        }
        let v = self.act(w, 0, &unit)?;
        let piece = &self.pieces[degree as usize];
        let (rem, _) = piece.relations.reduce(&v);
        let coordinates = rem.iter().map(|(i, c)| (piece.labels[i].clone(), c.to_string())).collect();
        Ok(Evaluation { degree, vanishes: rem.is_zero(), coordinates })
    }

    /// Human-readable form of a vector in degree `k`.
    pub fn describe(&self, k: u32, v: &SparseVec) -> String {
        let Some(p) = self.piece(k) else { return "0".into() };
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| if c.is_one() { p.labels[i].clone() } else { format!("({c})*{}", p.labels[i]) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Forget degrees above `bound`.
    pub fn truncate(&self, bound: u32) -> GradedModule {
        let bound = bound.min(self.bound);
        let pieces = self.pieces[..=bound as usize].to_vec();
        let actions = self
            .actions
            .iter()
            .zip(self.ring.degrees())
            .map(|(per, &dg)| {
                (0..=bound).map(|k| if k + dg <= bound { per[k as usize].clone() } else { Vec::new() }).collect()
            })
            .collect();
        GradedModule { ring: self.ring.clone(), bound, pieces, actions, summands: self.summands.clone() }
    }

    /// `self ⊕ other` over the same ring and bound.
    pub fn direct_sum(&self, other: &GradedModule) -> Result<GradedModule> {
        if *self.ring != *other.ring || self.bound != other.bound {
            return Err(Error::InvalidModule("direct sum needs the same ring and bound".into()));
        }
        let offset = self.summands.len();
        let pieces = self
            .pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| {
                let mut labels = a.labels.clone();
                labels.extend(b.labels.iter().cloned());
                let mut summands = a.summands.clone();
                summands.extend(b.summands.iter().map(|s| s + offset));
                Piece::from_parts(labels, summands, a.relations.direct_sum(&b.relations))
            })
            .collect();
        let mut actions = Vec::with_capacity(self.actions.len());
        for ((pa, pb), &dg) in self.actions.iter().zip(&other.actions).zip(self.ring.degrees()) {
            let per = pa
                .iter()
                .zip(pb)
                .enumerate()
                .map(|(k, (ca, cb))| {
                    let shift = self.rank(k as u32 + dg);
                    ca.iter().cloned().chain(cb.iter().map(|v| v.offset(shift))).collect()
                })
                .collect();
            actions.push(per);
        }
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Ok(GradedModule { ring: self.ring.clone(), bound: self.bound, pieces, actions, summands })
    }

    /// Check the module axioms in every degree.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModule(msg));
        if self.pieces.len() != self.bound as usize + 1 {
            return bad(format!("{} pieces for bound {}", self.pieces.len(), self.bound));
        }
        if self.actions.len() != self.ring.ngens() {
            return bad(format!("{} action families for {} generators", self.actions.len(), self.ring.ngens()));
        }
        for p in &self.pieces {
            if p.relations.ring() != self.base() {
                return Err(Error::MixedRings(self.base(), p.relations.ring()));
            }
            if p.summands.iter().any(|&s| s >= self.summands.len()) {
                return bad("basis vector tagged with an unknown summand".into());
            }
        }
        for (g, &dg) in self.ring.degrees().iter().enumerate() {
            for k in 0..=self.bound {
                let cols = self.actions[g].get(k as usize).map_or(&[][..], Vec::as_slice);
                let expected = if k + dg <= self.bound { self.rank(k) } else { 0 };
                if cols.len() != expected {
                    return bad(format!("generator {g} in degree {k}: {} columns, expected {expected}", cols.len()));
                }
                if expected == 0 {
                    continue;
                }
                let target = &self.pieces[(k + dg) as usize];
                if cols.iter().any(|c| c.max_index().is_some_and(|i| i >= target.rank())) {
                    return bad(format!("generator {g} in degree {k} leaves the target basis"));
                }
                for (_, n) in self.pieces[k as usize].relations.basis() {
                    if !target.relations.contains(&self.act_generator(g, k, n)) {
                        return bad(format!("generator {g} does not preserve relations in degree {k}"));
                    }
                }
            }
        }
        let base = self.base();
        for (g, &dg) in self.ring.degrees().iter().enumerate() {
            for (h, &dh) in self.ring.degrees().iter().enumerate().skip(g + 1) {
                for k in 0..=self.bound.saturating_sub(dg + dh) {
                    let target = &self.pieces[(k + dg + dh) as usize];
                    for j in 0..self.rank(k) {
                        let e = SparseVec::unit(base, j);
                        let gh = self.act_generator(g, k + dh, &self.act_generator(h, k, &e));
                        let hg = self.act_generator(h, k + dg, &self.act_generator(g, k, &e));
                        if !target.relations.contains(&gh.sub(&hg, base)) {
                            return bad(format!("generators {g} and {h} do not commute in degree {k}"));
                        }
                    }
                }
            }
        }
        for r in self.ring.relations() {
            let dr = self.ring.homogeneous_degree(r)?.unwrap_or(0);
            for k in 0..=self.bound.saturating_sub(dr) {
                if k + dr > self.bound {
                    continue;
                }
                for j in 0..self.rank(k) {
                    let v = self.act(r, k, &SparseVec::unit(base, j))?;
                    if !self.pieces[(k + dr) as usize].relations.contains(&v) {
                        return bad(format!("relation {} acts nontrivially in degree {k}", self.ring.format(r)));
                    }
                }
            }
        }
        Ok(())
    }
}
