//! Quotients of graded modules by elements and sequences of elements.

mod checks;
mod module;
mod report;
mod stage;
mod tower;

pub use module::{Evaluation, GradedModule, Piece, Summand, SummandKind};
pub use stage::{KernelWitness, QuotientStage, SeqElement, StageStatus, quotient_by_element, shifted_sum};
pub use tower::{
    DroppedElement, OrderPolicy, QuotientTower, RegularityFailure, RegularityReport, SequenceProgram, SequenceSpec,
    is_regular_sequence, quotient_by_sequence, ring_module,
};
pub use checks::{
    AlgebraCriteria, OrderInvarianceReport, StageCriterion, algebra_structure_criteria, check_connectivity_lemma,
    check_order_invariance,
};
pub use report::{StageReport, TOWER_SCHEMA_VERSION, TowerReport};
