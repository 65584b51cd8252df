//! Sequence classification, non-isomorphism witnesses and their certificates.

mod candidates;
mod certificate;
mod claim;
mod classify;
mod rational;
mod source;
mod theorem;

pub use candidates::{Candidate, Modification, candidate_family, canonical_family, certify_family};
pub use certificate::{
    Branch, BranchCheck, CERTIFICATE_SCHEMA_VERSION, CertificateKind, EvaluationPair, NonIsoCertificate,
    SurjectivityData, VerificationReport, verify_certificate,
};
pub use claim::{
    CLAIM_SCHEMA_VERSION, ClaimBudget, ClaimCell, ClaimFailure, ClaimReport, random_decomposable_tail, verify_claim,
};
pub use classify::{SequenceClassification, Verdict, ViolationCase, classify_sequence};
pub use rational::rational_witness;
pub use source::{BuiltModel, CertificateModel, LocalSequence, RationalSequence, SequenceSource};
pub use theorem::{FailingIndex, least_failing_index, theorem_certify};
