use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::module::{GradedModule, Piece, Summand, SummandKind};
use crate::coeffs::{BaseRing, InvariantFactorProfile, Lattice, SparseVec};
use crate::error::{Error, Result};
use crate::graded::{DegreeProfile, PresentedRing, RingElement};

/// A sequence entry: an element together with its degree, so that zero has a degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqElement {
    pub element: RingElement,
    pub degree: u32,
}

impl SeqElement {
    /// Nonzero homogeneous element; its degree is read off.
    pub fn new(ring: &PresentedRing, element: RingElement) -> Result<Self> {
        match ring.homogeneous_degree(&element)? {
            Some(degree) => Ok(SeqElement { element, degree }),
            None => Err(Error::InvalidSequence("zero element needs an explicit degree (write 0@d)".into())),
        }
    }

    pub fn with_degree(ring: &PresentedRing, element: RingElement, degree: u32) -> Result<Self> {
        match ring.homogeneous_degree(&element)? {
            Some(d) if d != degree => {
                Err(Error::InvalidSequence(format!("{} has degree {d}, not {degree}", ring.format(&element))))
            }
            _ => Ok(SeqElement { element, degree }),
        }
    }

    pub fn zero(degree: u32) -> Self {
        SeqElement { element: RingElement::zero(), degree }
    }

    /// Parse `expr` or `expr@d`.
    pub fn parse(ring: &PresentedRing, text: &str) -> Result<Self> {
        match text.rsplit_once('@') {
            Some((expr, d)) => {
                let degree = d.trim().parse().map_err(|_| Error::Parse(format!("bad degree in {text:?}")))?;
                Self::with_degree(ring, ring.parse(expr)?, degree)
            }
            None => Self::new(ring, ring.parse(text)?),
        }
    }

    pub fn format(&self, ring: &PresentedRing) -> String {
        format!("{}@{}", ring.format(&self.element), self.degree)
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    /// Injective in every checkable degree.
    Regular,
    /// Acts as zero in every checkable degree; the quotient splits off a shifted copy.
    ZeroSplit,
    /// Nonzero zerodivisor; the output is an associated graded.
    Ambiguous,
}

/// A nonzero kernel class of multiplication by the stage element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitness {
    pub degree: u32,
    pub expression: String,
    #[serde(skip)]
    pub vector: SparseVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStage {
    /// Position in the tower, starting at 1.
    pub index: usize,
    pub element: SeqElement,
    pub expression: String,
    pub status: StageStatus,
    /// `ker(x)` in each source degree `k` with `k + d <= D`.
    pub kernel: DegreeProfile,
    /// `coker(x)` in each degree `<= D`.
    pub cokernel: DegreeProfile,
    pub input: DegreeProfile,
    pub output: DegreeProfile,
    pub witness: Option<KernelWitness>,
    /// Ambiguous over `Z_(p)`: torsion in the output is an associated graded, not canonical.
    pub non_canonical_torsion: bool,
    pub note: Option<String>,
}

impl QuotientStage {
    pub fn degree(&self) -> u32 {
        self.element.degree
    }
}

/// Multiplication by `x` from degree `k`: the kernel lattice `K_k` and the enlarged relations in `k + d`.
struct DegreeStep {
    kernel: Lattice,
    image_relations: Lattice,
}

fn step(m: &GradedModule, x: &RingElement, d: u32, k: u32) -> Result<DegreeStep> {
    let base = m.base();
    let t = k + d;
    let (a_t, a_k) = (m.rank(t), m.rank(k));
    let target = m.piece(t).expect("degree within bound").relations();
    let mut graph = target.extended(a_t + a_k);
    for j in 0..a_k {
        let image = m.act(x, k, &SparseVec::unit(base, j))?;
        graph.insert(image.concat(a_t, &SparseVec::unit(base, j)));
    }
    let (image_relations, kernel) = graph.split_at(a_t);
    Ok(DegreeStep { kernel, image_relations })
}

/// Quotient by one element; see [`StageStatus`] for the three outcomes.
pub fn quotient_by_element(m: &GradedModule, x: &SeqElement) -> Result<(GradedModule, QuotientStage)> {
    quotient_stage(m, x, 1)
}

pub(crate) fn quotient_stage(m: &GradedModule, x: &SeqElement, index: usize) -> Result<(GradedModule, QuotientStage)> {
    let ring = m.ring().clone();
    if ring.homogeneous_degree(&x.element)?.is_some_and(|d| d != x.degree) {
        return Err(Error::InvalidSequence(format!("{} is not of degree {}", ring.format(&x.element), x.degree)));
    }
    let d = x.degree;
    if d < 4 {
        return Err(Error::InvalidSequence(format!("element degree {d} below 4")));
    }
    let bound = m.bound();
    let input = m.degree_profile();
    let expression = ring.format(&x.element);
    if d > bound {
        let stage = QuotientStage {
            index,
            element: x.clone(),
            expression,
            status: StageStatus::Regular,
            kernel: DegreeProfile::default(),
            cokernel: input.clone(),
            input: input.clone(),
            output: input,
            witness: None,
            non_canonical_torsion: false,
            note: Some(format!("degree {d} above bound {bound}: no effect in degrees <= {bound}")),
        };
        return Ok((m.clone(), stage));
    }

    let steps: Vec<DegreeStep> =
        (0..=bound - d).into_par_iter().map(|k| step(m, &x.element, d, k)).collect::<Result<_>>()?;

    let mut regular = true;
    let mut zero = true;
    let mut witness = None;
    let mut kernel_profile = DegreeProfile::default();
    for (k, s) in steps.iter().enumerate() {
        let k = k as u32;
        let relations = m.piece(k).expect("in range").relations();
        if !relations.contains_lattice(&s.kernel) {
            regular = false;
            if witness.is_none() {
                let v = s.kernel.basis().map(|(_, v)| v).find(|v| !relations.contains(v)).expect("kernel exceeds relations");
                witness = Some(KernelWitness { degree: k, expression: m.describe(k, v), vector: v.clone() });
            }
        }
        if !s.kernel.is_everything() {
            zero = false;
        }
        let kp = s.kernel.relative_profile(relations).ok_or_else(|| {
            Error::InvalidModule(format!("relations in degree {k} not inside the kernel of {expression}"))
        })?;
        kernel_profile.0.insert(k, kp);
    }
    let status = if regular {
        StageStatus::Regular
    } else if zero {
        StageStatus::ZeroSplit
    } else {
        StageStatus::Ambiguous
    };

    let coker_relations: Vec<Lattice> = (0..=bound)
        .map(|t| match t.checked_sub(d) {
            Some(k) => steps[k as usize].image_relations.clone(),
            None => m.piece(t).expect("in range").relations().clone(),
        })
        .collect();
    let cokernel = DegreeProfile(coker_relations.iter().enumerate().map(|(t, l)| (t as u32, l.quotient_profile())).collect());

    let out = match status {
        StageStatus::Regular => regular_output(m, coker_relations),
        StageStatus::ZeroSplit => split_output(m, d, index),
        StageStatus::Ambiguous => ambiguous_output(m, coker_relations, &steps, d, index)?,
    };
    let stage = QuotientStage {
        index,
        element: x.clone(),
        expression,
        status,
        kernel: kernel_profile,
        cokernel,
        input,
        output: out.degree_profile(),
        witness,
        non_canonical_torsion: status == StageStatus::Ambiguous && matches!(m.base(), BaseRing::Local(_)),
        note: None,
    };
    Ok((out, stage))
}

fn regular_output(m: &GradedModule, relations: Vec<Lattice>) -> GradedModule {
    let pieces = m
        .pieces()
        .iter()
        .zip(relations)
        .map(|(p, rel)| Piece::from_parts(p.labels().to_vec(), (0..p.rank()).map(|i| p.summand_of(i)).collect(), rel))
        .collect();
    GradedModule::from_parts(m.ring().clone(), m.bound(), pieces, m.actions().to_vec(), m.summands().to_vec())
}

/// `M ⊕ Σ^{d+1} M` with block-diagonal action.
fn split_output(m: &GradedModule, d: u32, stage: usize) -> GradedModule {
    let shift = d + 1;
    let bound = m.bound();
    let offset = m.summands().len();
    let mut summands = m.summands().to_vec();
    summands.extend(m.summands().iter().map(|s| Summand { shift: s.shift + shift, kind: SummandKind::Split { stage } }));
    let pieces: Vec<Piece> = (0..=bound)
        .map(|t| {
            let top = m.piece(t).expect("in range");
            let mut labels = top.labels().to_vec();
            let mut tags: Vec<usize> = (0..top.rank()).map(|i| top.summand_of(i)).collect();
            let rel = match t.checked_sub(shift) {
                Some(s) => {
                    let low = m.piece(s).expect("in range");
                    labels.extend(low.labels().iter().map(|l| format!("s{stage}[{l}]")));
                    tags.extend((0..low.rank()).map(|i| low.summand_of(i) + offset));
                    top.relations().direct_sum(low.relations())
                }
                None => top.relations().clone(),
            };
            Piece::from_parts(labels, tags, rel)
        })
        .collect();
    let actions = m
        .actions()
        .iter()
        .zip(m.ring().degrees())
        .map(|(per, &dg)| {
            (0..=bound)
                .map(|t| {
                    if t + dg > bound {
                        return Vec::new();
                    }
                    let mut cols = per[t as usize].clone();
                    if let Some(s) = t.checked_sub(shift) {
                        let top_rank = m.rank(t + dg);
                        cols.extend(per[s as usize].iter().map(|v| v.offset(top_rank)));
                    }
                    cols
                })
                .collect()
        })
        .collect();
    GradedModule::from_parts(m.ring().clone(), bound, pieces, actions, summands)
}

/// `coker(x)_t ⊕ ker(x)_{t-d-1}`, the kernel written in a basis of `K_{t-d-1}`.
fn ambiguous_output(
    m: &GradedModule,
    coker: Vec<Lattice>,
    steps: &[DegreeStep],
    d: u32,
    stage: usize,
) -> Result<GradedModule> {
    let shift = d + 1;
    let bound = m.bound();
    let base = m.base();
    let kernel_summand = m.summands().len();
    let mut summands = m.summands().to_vec();
    summands.push(Summand { shift, kind: SummandKind::Kernel { stage } });

    let kernel_basis: Vec<Vec<SparseVec>> = steps.iter().map(|s| s.kernel.basis_vectors()).collect();
    let mut pieces = Vec::with_capacity(bound as usize + 1);
    for (t, rel) in (0..=bound).zip(coker) {
        let top = m.piece(t).expect("in range");
        let mut labels = top.labels().to_vec();
        let mut tags: Vec<usize> = (0..top.rank()).map(|i| top.summand_of(i)).collect();
        let rel = match t.checked_sub(shift) {
            Some(j) => {
                let k = &steps[j as usize].kernel;
                labels.extend(kernel_basis[j as usize].iter().map(|v| format!("k{stage}[{}]", m.describe(j, v))));
                tags.extend(std::iter::repeat_n(kernel_summand, k.rank()));
                let mut inner = Lattice::new(base, k.rank());
                for (_, n) in m.piece(j).expect("in range").relations().basis() {
                    inner.insert(k.coordinate_vector(n).ok_or_else(|| {
                        Error::InvalidModule(format!("relation in degree {j} outside the kernel"))
                    })?);
                }
                rel.direct_sum(&inner)
            }
            None => rel,
        };
        pieces.push(Piece::from_parts(labels, tags, rel));
    }

    let mut actions = Vec::with_capacity(m.actions().len());
    for (g, (per, &dg)) in m.actions().iter().zip(m.ring().degrees()).enumerate() {
        let mut out = Vec::with_capacity(bound as usize + 1);
        for t in 0..=bound {
            if t + dg > bound {
                out.push(Vec::new());
                continue;
            }
            let mut cols = per[t as usize].clone();
            if let Some(j) = t.checked_sub(shift) {
                let top_rank = m.rank(t + dg);
                let next = &steps[(j + dg) as usize].kernel;
                for b in &kernel_basis[j as usize] {
                    let image = m.act_generator(g, j, b);
                    let coords = next.coordinate_vector(&image).ok_or_else(|| {
                        Error::InvalidModule(format!("kernel not preserved by generator {g} in degree {j}"))
                    })?;
                    cols.push(coords.offset(top_rank));
                }
            }
            out.push(cols);
        }
        actions.push(out);
    }
    Ok(GradedModule::from_parts(m.ring().clone(), bound, pieces, actions, summands))
}

/// Profile sum helper used by the split law.
pub fn shifted_sum(input: &DegreeProfile, shift: u32, bound: u32) -> DegreeProfile {
    DegreeProfile(
        (0..=bound)
            .map(|k| {
                let low = k.checked_sub(shift).map(|s| input.get(s)).unwrap_or_else(InvariantFactorProfile::zero);
                (k, input.get(k).sum(&low))
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graded::Generator;

    fn single(base: BaseRing, relations: &[&str], bound: u32) -> GradedModule {
        let free = PresentedRing::polynomial(base, vec![Generator::new("a", 8)], bound).unwrap();
        let rels = relations.iter().map(|r| free.parse(r).unwrap()).collect();
        let ring = PresentedRing::new(base, free.generators().to_vec(), rels, bound).unwrap();
        GradedModule::free_ring_module(Arc::new(ring)).unwrap()
    }

    #[test]
    fn regular_quotient_of_polynomial() {
        let m = single(BaseRing::Rational, &[], 40);
        let a = SeqElement::parse(m.ring(), "a").unwrap();
        let (out, stage) = quotient_by_element(&m, &a).unwrap();
        assert_eq!(stage.status, StageStatus::Regular);
        assert_eq!(out.profile(0), InvariantFactorProfile::free(1));
        for k in 1..=40 {
            assert!(out.profile(k).is_zero(), "degree {k}");
        }
        out.validate().unwrap();
    }

    #[test]
    fn zero_splits() {
        let m = single(BaseRing::Rational, &[], 40);
        let (out, stage) = quotient_by_element(&m, &SeqElement::zero(8)).unwrap();
        assert_eq!(stage.status, StageStatus::ZeroSplit);
        for k in 0..=40 {
            let expected = m.rank(k) + k.checked_sub(9).map_or(0, |s| m.rank(s));
            assert_eq!(out.profile(k).free_rank, expected, "degree {k}");
        }
        assert_eq!(out.profile(9).free_rank, 1);
        assert_eq!(out.degree_profile(), shifted_sum(&m.degree_profile(), 9, 40));
        out.validate().unwrap();
    }

    #[test]
    fn zerodivisor_is_ambiguous() {
        let m = single(BaseRing::Rational, &["a^2"], 40);
        let a = SeqElement::parse(m.ring(), "a").unwrap();
        let (out, stage) = quotient_by_element(&m, &a).unwrap();
        assert_eq!(stage.status, StageStatus::Ambiguous);
        assert_eq!(stage.witness.as_ref().unwrap().degree, 8);
        assert_eq!(out.profile(16).free_rank, 0);
        assert_eq!(out.profile(17).free_rank, 1);
        assert!(out.profile(9).is_zero());
        assert!(!stage.non_canonical_torsion);
        out.validate().unwrap();
    }

    #[test]
    fn local_zerodivisor_flagged() {
        let m = single(BaseRing::Local(5), &["5*a"], 24);
        let a = SeqElement::parse(m.ring(), "a").unwrap();
        let (out, stage) = quotient_by_element(&m, &a).unwrap();
        assert_eq!(stage.status, StageStatus::Ambiguous);
        assert!(stage.non_canonical_torsion);
        assert_eq!(out.profile(0), InvariantFactorProfile::free(1));
        // degree 9 holds ker(a)_0 = 5 Z_(5), which is free of rank one
        assert_eq!(out.profile(9), InvariantFactorProfile::free(1));
        out.validate().unwrap();
    }

    #[test]
    fn high_degree_leaves_module() {
        let m = single(BaseRing::Rational, &[], 16);
        let (out, stage) = quotient_by_element(&m, &SeqElement::zero(20)).unwrap();
        assert!(stage.note.is_some());
        assert_eq!(out.degree_profile(), m.degree_profile());
    }

    #[test]
    fn parse_sequence_elements() {
        let m = single(BaseRing::Rational, &[], 16);
        assert_eq!(SeqElement::parse(m.ring(), "0@12").unwrap(), SeqElement::zero(12));
        assert!(SeqElement::parse(m.ring(), "0").is_err());
        assert!(SeqElement::parse(m.ring(), "a@12").is_err());
        assert_eq!(SeqElement::parse(m.ring(), "2*a").unwrap().degree, 8);
    }
}
