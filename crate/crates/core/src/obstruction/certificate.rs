use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::classify::{ViolationCase, classify_sequence};
use super::source::{BuiltModel, CertificateModel, SequenceSource};
use super::theorem::least_failing_index;
use crate::coeffs::{InvariantFactorProfile, Lattice, SparseVec};
use crate::error::{Error, Result};
use crate::graded::{IdealSpan, RingElement, RingMap};
use crate::models::critical_degree;
use crate::quotient::{Evaluation, GradedModule, QuotientTower, StageStatus, Summand, SummandKind, TowerReport};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// An element vanishing in exactly one of the two modules.
    Witness,
    /// The unit map into the quotient misses a degree where the tmf map is onto.
    SurjectivityFailure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Obstruction visible after tensoring with Q.
    Rational,
    /// First non-generating element below the torsion degree.
    BelowCritical,
    /// First non-generating element in the torsion degree.
    Critical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPair {
    pub quotient: Evaluation,
    pub tmf: Evaluation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityData {
    pub degree: u32,
    pub target: InvariantFactorProfile,
    pub image_rank: usize,
    pub image_spans: bool,
    pub tmf_surjective: bool,
    /// Summands with basis vectors in this degree other than the starting module.
    pub provenance: Vec<Summand>,
}

/// In degrees `<= 4n`: the unit map onto the quotient, with kernel the ideal of the sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchCheck {
    pub through: u32,
    pub surjective: bool,
    pub kernel_matches_ideal: bool,
    pub first_mismatch: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonIsoCertificate {
    pub schema_version: u32,
    pub kind: CertificateKind,
    pub prime: Option<u64>,
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<ViolationCase>,
    pub degree: u32,
    pub source: SequenceSource,
    pub model: CertificateModel,
    pub witness_expression: Option<String>,
    pub evaluations: Option<EvaluationPair>,
    pub surjectivity: Option<SurjectivityData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_check: Option<BranchCheck>,
    pub tower_digest: String,
    pub claim_report_digest: Option<String>,
}

impl NonIsoCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(CERTIFICATE_SCHEMA_VERSION) => {}
            other => return Err(Error::Document(format!("unsupported certificate schema version {other:?}"))),
        }
        Ok(serde_json::from_value(value)?)
    }
}

/// Value of `w` in tmf, as coordinates on monomials.
pub(crate) fn tmf_evaluation(map: &RingMap, w: &RingElement, degree: u32) -> Result<Evaluation> {
    let image = map.apply(w)?;
    let t = map.target();
    let coordinates = image
        .terms()
        .map(|(m, c)| (t.format(&t.monomial_element(m.clone())), c.to_string()))
        .collect::<Vec<_>>();
    Ok(Evaluation { degree, vanishes: image.is_zero(), coordinates })
}

/// Evaluations of the unit read off the final module are exact unless a zerodivisor stage is followed by more stages.
pub(crate) fn quotient_evaluation_exact(tower: &QuotientTower, vanishes: bool) -> bool {
    if vanishes {
        return true;
    }
    let n = tower.stages.len();
    tower.stages.iter().take(n.saturating_sub(1)).all(|s| s.status != StageStatus::Ambiguous)
}

pub(crate) fn evaluate_pair(built: &BuiltModel, tower: &QuotientTower, w: &RingElement) -> Result<EvaluationPair> {
    let quotient = tower.final_module.evaluate(w)?;
    let tmf = tmf_evaluation(&built.tmf, w, quotient.degree)?;
    Ok(EvaluationPair { quotient, tmf })
}

pub(crate) fn surjectivity_data(built: &BuiltModel, m: &GradedModule, degree: u32) -> Result<SurjectivityData> {
    let ring = &built.ring;
    let piece = m.piece(degree).ok_or(Error::DegreeOutOfRange { degree, bound: m.bound() })?;
    let unit = m.unit().ok_or_else(|| Error::InvalidModule("module has no unit class".into()))?;
    let mut image = piece.relations().clone();
    let before = image.rank();
    for mono in ring.monomials_of_degree(degree)? {
        image.insert(m.act(&ring.monomial_element(mono), 0, &unit)?);
    }
    let mut provenance: Vec<Summand> = Vec::new();
    for i in 0..piece.rank() {
        let s = &m.summands()[piece.summand_of(i)];
        if s.kind != SummandKind::Base && !provenance.contains(s) {
            provenance.push(s.clone());
        }
    }
    Ok(SurjectivityData {
        degree,
        target: piece.profile(),
        image_rank: image.rank() - before,
        image_spans: image.quotient_profile().is_zero(),
        tmf_surjective: built.tmf.is_surjective_in(degree)?,
        provenance,
    })
}

/// `{v in R^a : v ⊕ 0 ∈ lattice}` for a lattice in `R^a ⊕ R^b`.
fn prefix_kernel(lattice: &Lattice, a: usize) -> Lattice {
    let dim = lattice.dim();
    if a == dim {
        return lattice.clone();
    }
    let rotated = Lattice::spanned_by(
        lattice.ring(),
        dim,
        lattice.basis().map(|(_, v)| v.window(a..dim).concat(dim - a, &v.window(0..a))),
    );
    rotated.split_at(dim - a).1
}

/// Compare the unit map's kernel with the ideal of the sequence in each degree `<= through`.
pub(crate) fn branch_check(built: &BuiltModel, tower: &QuotientTower, through: u32) -> Result<BranchCheck> {
    let ring = &built.ring;
    let base = ring.base();
    let gens: Vec<RingElement> = built.sequence.iter().map(|x| x.element.clone()).collect();
    let ideal = IdealSpan::new(ring, gens)?;
    let m = &tower.final_module;
    let mut surjective = true;
    let mut first_mismatch = None;
    for k in 0..=through.min(m.bound()) {
        let a = ring.dimension(k)?;
        let piece = m.piece(k).expect("in range");
        let mut spanned = piece.relations().clone();
        for i in 0..a {
            spanned.insert(SparseVec::unit(base, i));
        }
        if !spanned.quotient_profile().is_zero() {
            surjective = false;
        }
        let kernel = prefix_kernel(piece.relations(), a);
        if first_mismatch.is_none() && !kernel.same_span(ideal.lattice(k)?) {
            first_mismatch = Some(k);
        }
    }
    Ok(BranchCheck { through, surjective, kernel_matches_ideal: first_mismatch.is_none(), first_mismatch })
}

#[derive(Serialize)]
struct RegularityLedger<'a> {
    prime: Option<u64>,
    sequence: &'a str,
    checked_through: u32,
    stages: Vec<(usize, &'a str, u32, StageStatus)>,
}

/// Digest of the per-stage regularity record: each element a non-zerodivisor modulo the previous ones.
pub(crate) fn regularity_ledger_digest(prime: Option<u64>, tower: &QuotientTower) -> String {
    let ledger = RegularityLedger {
        prime,
        sequence: &tower.source,
        checked_through: tower.bound(),
        stages: tower.stages.iter().map(|s| (s.index, s.expression.as_str(), s.degree(), s.status)).collect(),
    };
    hex::encode(Sha256::digest(serde_json::to_vec(&ledger).expect("ledger serializes")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub sound: bool,
    pub discrepancies: Vec<String>,
}

/// Rebuild the model from the certificate's parameters and re-check every stored value.
pub fn verify_certificate(cert: &NonIsoCertificate) -> Result<VerificationReport> {
    let mut bad = Vec::new();
    if cert.schema_version != CERTIFICATE_SCHEMA_VERSION {
        bad.push(format!("schema version {}", cert.schema_version));
    }
    if cert.prime != cert.source.prime() || (cert.model.prime().is_some() && cert.model.prime() != cert.prime) {
        bad.push("prime does not match the model and source".into());
    }
    if let Err(e) = check_route(cert, &mut bad) {
        bad.push(format!("route does not rebuild: {e}"));
    }
    let built = match cert.model.build(&cert.source) {
        Ok(b) => b,
        Err(e) => return Ok(report(vec![format!("model does not rebuild: {e}")])),
    };
    let tower = match built.tower() {
        Ok(t) => t,
        Err(e) => return Ok(report(vec![format!("tower does not rebuild: {e}")])),
    };
    if TowerReport::of(&tower).digest() != cert.tower_digest {
        bad.push("tower digest differs".into());
    }
    let ledger = match cert.model {
        CertificateModel::Rational { .. } => None,
        _ => Some(regularity_ledger_digest(cert.prime, &tower)),
    };
    if ledger != cert.claim_report_digest {
        bad.push("claim report digest differs".into());
    }
    match cert.kind {
        CertificateKind::Witness => check_witness(cert, &built, &tower, &mut bad),
        CertificateKind::SurjectivityFailure => check_surjectivity(cert, &built, &tower, &mut bad),
    }
    if let Some(stored) = &cert.branch_check {
        match branch_check(&built, &tower, stored.through) {
            Ok(check) if &check == stored => {
                if !(check.surjective && check.kernel_matches_ideal) {
                    bad.push("branch check does not hold".into());
                }
            }
            Ok(_) => bad.push("branch check differs".into()),
            Err(e) => bad.push(format!("branch check failed: {e}")),
        }
    }
    Ok(report(bad))
}

/// Branch, case, model and degree must be the ones the certifier would choose for this source.
fn check_route(cert: &NonIsoCertificate, bad: &mut Vec<String>) -> Result<()> {
    let (qring, qxs) = cert.source.rational_view()?;
    let class = classify_sequence(&qring, &qxs, qring.truncation())?;
    if let Some(case) = class.case {
        if cert.branch != Branch::Rational || cert.case != Some(case) {
            bad.push(format!("rational violation {} requires the rational branch", case.label()));
        }
        let d = class.degree.expect("violation has a degree");
        if cert.model != (CertificateModel::Rational { bound: (d + 2).next_multiple_of(2).max(8) }) {
            bad.push("model differs from the rational model for this violation".into());
        }
        return Ok(());
    }
    let SequenceSource::Local(local) = &cert.source else {
        bad.push("conforming rational sequence carries no certificate".into());
        return Ok(());
    };
    if cert.case.is_some() {
        bad.push("conforming sequence marked with a violation case".into());
    }
    let h = local.presentation()?;
    let xs = local.parse(&h)?;
    let Some(fail) = least_failing_index(&h, &xs)? else {
        bad.push("every element generates its indecomposables; no branch applies".into());
        return Ok(());
    };
    let expected = if fail.degree < critical_degree(local.prime) {
        (Branch::BelowCritical, CertificateModel::BelowCritical { prime: local.prime, index: fail.index })
    } else {
        (Branch::Critical, CertificateModel::Critical { prime: local.prime, tail: local.tail.clone() })
    };
    if (cert.branch, &cert.model) != (expected.0, &expected.1) {
        bad.push(format!("branch and model differ from {:?} at index {}", expected.0, fail.index));
    }
    if cert.degree != fail.degree {
        bad.push(format!("degree {} differs from the least failing degree {}", cert.degree, fail.degree));
    }
    Ok(())
}

fn report(discrepancies: Vec<String>) -> VerificationReport {
    VerificationReport { sound: discrepancies.is_empty(), discrepancies }
}

fn check_witness(cert: &NonIsoCertificate, built: &BuiltModel, tower: &QuotientTower, bad: &mut Vec<String>) {
    let (Some(expr), Some(stored)) = (&cert.witness_expression, &cert.evaluations) else {
        bad.push("witness certificate without witness data".into());
        return;
    };
    let w = match built.parse_witness(expr) {
        Ok(w) => w,
        Err(e) => {
            bad.push(format!("witness does not parse: {e}"));
            return;
        }
    };
    match built.ring.homogeneous_degree(&w) {
        Ok(Some(d)) if d == cert.degree => {}
        Ok(d) => bad.push(format!("witness degree {d:?} differs from {}", cert.degree)),
        Err(e) => bad.push(format!("witness not homogeneous: {e}")),
    }
    let pair = match evaluate_pair(built, tower, &w) {
        Ok(p) => p,
        Err(e) => {
            bad.push(format!("witness does not evaluate: {e}"));
            return;
        }
    };
    if &pair != stored {
        bad.push("stored evaluations differ from recomputed ones".into());
    }
    if pair.quotient.vanishes == pair.tmf.vanishes {
        bad.push("witness vanishes in both modules or in neither".into());
    }
    if !quotient_evaluation_exact(tower, pair.quotient.vanishes) {
        bad.push("quotient evaluation depends on an unresolved extension".into());
    }
}

fn check_surjectivity(cert: &NonIsoCertificate, built: &BuiltModel, tower: &QuotientTower, bad: &mut Vec<String>) {
    let Some(stored) = &cert.surjectivity else {
        bad.push("surjectivity certificate without data".into());
        return;
    };
    if stored.degree != cert.degree {
        bad.push("surjectivity degree differs from certificate degree".into());
    }
    match surjectivity_data(built, &tower.final_module, cert.degree) {
        Ok(data) => {
            if &data != stored {
                bad.push("stored surjectivity data differ from recomputed ones".into());
            }
            if data.image_spans || !data.tmf_surjective {
                bad.push("no surjectivity gap in this degree".into());
            }
        }
        Err(e) => bad.push(format!("surjectivity data do not rebuild: {e}")),
    }
}
