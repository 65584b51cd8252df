use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::module::GradedModule;
use super::stage::{KernelWitness, QuotientStage, SeqElement, StageStatus, quotient_stage};
use crate::error::{Error, Result};
use crate::graded::{DegreeProfile, PresentedRing};

/// How a sequence given out of degree order is treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// Stable-sort by degree and record a notice.
    #[default]
    Sort,
    /// Keep the given order; a descending pair is refused.
    Strict,
}

/// An infinite or lazily generated sequence: the elements of each degree.
pub trait SequenceProgram: Send + Sync {
    fn name(&self) -> String;
    fn elements_in_degree(&self, ring: &PresentedRing, degree: u32) -> Result<Vec<SeqElement>>;
}

pub enum SequenceSpec {
    Finite(Vec<SeqElement>),
    Program(Box<dyn SequenceProgram>),
}

impl fmt::Debug for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Finite(xs) => f.debug_tuple("Finite").field(xs).finish(),
            SequenceSpec::Program(p) => f.debug_tuple("Program").field(&p.name()).finish(),
        }
    }
}

impl From<Vec<SeqElement>> for SequenceSpec {
    fn from(xs: Vec<SeqElement>) -> Self {
        SequenceSpec::Finite(xs)
    }
}

impl SequenceSpec {
    /// Parse a list of `expr` / `expr@d` entries.
    pub fn parse(ring: &PresentedRing, entries: &[impl AsRef<str>]) -> Result<Self> {
        Ok(SequenceSpec::Finite(entries.iter().map(|e| SeqElement::parse(ring, e.as_ref())).collect::<Result<_>>()?))
    }
}

/// An element skipped because its degree exceeds the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedElement {
    pub position: usize,
    pub expression: String,
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub struct QuotientTower {
    pub initial: DegreeProfile,
    pub stages: Vec<QuotientStage>,
    pub final_module: GradedModule,
    pub dropped: Vec<DroppedElement>,
    pub notices: Vec<String>,
    /// Number of stages after which degrees `<= D` stop changing.
    pub stability_bound: usize,
    pub source: String,
}

impl QuotientTower {
    pub fn bound(&self) -> u32 {
        self.final_module.bound()
    }

    pub fn final_profile(&self) -> DegreeProfile {
        self.final_module.degree_profile()
    }

    pub fn is_regular(&self) -> bool {
        self.stages.iter().all(|s| s.status == StageStatus::Regular)
    }

    pub fn first_failure(&self) -> Option<&QuotientStage> {
        self.stages.iter().find(|s| s.status != StageStatus::Regular)
    }
}

/// Resolve a spec into the elements that can act in degrees `<= D`, in tower order.
pub(crate) fn resolve(
    ring: &PresentedRing,
    spec: &SequenceSpec,
    bound: u32,
    policy: OrderPolicy,
) -> Result<(Vec<SeqElement>, Vec<DroppedElement>, Vec<String>, String)> {
    let mut notices = Vec::new();
    let mut dropped = Vec::new();
    match spec {
        SequenceSpec::Finite(xs) => {
            let sorted = xs.windows(2).all(|w| w[0].degree <= w[1].degree);
            if !sorted && policy == OrderPolicy::Strict {
                let degrees: Vec<u32> = xs.iter().map(|x| x.degree).collect();
                return Err(Error::Refusal {
                    reason: format!("sequence degrees {degrees:?} are not non-decreasing"),
                    required_bound: None,
                });
            }
            let mut order: Vec<(usize, &SeqElement)> = xs.iter().enumerate().collect();
            if !sorted {
                order.sort_by_key(|(_, x)| x.degree);
                notices.push("sequence sorted by degree; the final quotient does not depend on the order".into());
            }
            let mut kept = Vec::new();
            for (i, x) in order {
                if x.degree > bound {
                    dropped.push(DroppedElement { position: i + 1, expression: ring.format(&x.element), degree: x.degree });
                } else {
                    kept.push(x.clone());
                }
            }
            let source = xs.iter().map(|x| x.format(ring)).collect::<Vec<_>>().join(", ");
            Ok((kept, dropped, notices, format!("({source})")))
        }
        SequenceSpec::Program(p) => {
            let mut kept = Vec::new();
            for d in 0..=bound {
                for x in p.elements_in_degree(ring, d)? {
                    if x.degree != d {
                        return Err(Error::InvalidSequence(format!(
                            "program {} produced degree {} in degree {d}",
                            p.name(),
                            x.degree
                        )));
                    }
                    kept.push(x);
                }
            }
            notices.push(format!("program {} evaluated through degree {bound}", p.name()));
            Ok((kept, dropped, notices, p.name()))
        }
    }
}

/// Iterated quotient `M/(x_1, x_2, ...)` through the module's degree bound.
pub fn quotient_by_sequence(m: &GradedModule, spec: &SequenceSpec, policy: OrderPolicy) -> Result<QuotientTower> {
    let (elements, dropped, notices, source) = resolve(m.ring(), spec, m.bound(), policy)?;
    run_in_order(m, &elements, dropped, notices, source, false)
}

/// Run stages exactly in the given order.
pub(crate) fn run_in_order(
    m: &GradedModule,
    elements: &[SeqElement],
    dropped: Vec<DroppedElement>,
    notices: Vec<String>,
    source: String,
    stop_at_failure: bool,
) -> Result<QuotientTower> {
    let initial = m.degree_profile();
    let mut current = m.clone();
    let mut stages = Vec::with_capacity(elements.len());
    for (i, x) in elements.iter().enumerate() {
        let (next, stage) = quotient_stage(&current, x, i + 1)?;
        let failed = stage.status != StageStatus::Regular;
        current = next;
        stages.push(stage);
        if failed && stop_at_failure {
            break;
        }
    }
    Ok(QuotientTower { initial, stability_bound: stages.len(), stages, final_module: current, dropped, notices, source })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityFailure {
    /// Position in tower order, starting at 1.
    pub index: usize,
    pub element: String,
    pub degree: u32,
    pub status: StageStatus,
    pub witness: KernelWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub checked_through: u32,
    pub failure: Option<RegularityFailure>,
}

/// Whether each element is a non-zerodivisor on the previous quotient, in all checkable degrees.
pub fn is_regular_sequence(m: &GradedModule, spec: &SequenceSpec) -> Result<RegularityReport> {
    let (elements, dropped, notices, source) = resolve(m.ring(), spec, m.bound(), OrderPolicy::Sort)?;
    let tower = run_in_order(m, &elements, dropped, notices, source, true)?;
    let failure = tower.first_failure().map(|s| RegularityFailure {
        index: s.index,
        element: s.expression.clone(),
        degree: s.degree(),
        status: s.status,
        witness: s.witness.clone().expect("non-regular stage carries a witness"),
    });
    Ok(RegularityReport { regular: failure.is_none(), checked_through: m.bound(), failure })
}

/// Module of the ring over itself, shared by callers that start from a presented ring.
pub fn ring_module(ring: &Arc<PresentedRing>) -> Result<GradedModule> {
    GradedModule::free_ring_module(ring.clone())
}
