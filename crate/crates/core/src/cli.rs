//! Document-driven batch jobs behind the `mo8q` binary.
//!
//! [`run`] turns a [`JobSpec`] into one UTF-8 JSON document and an exit status.
//! Identical specs produce byte-identical documents.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffs::{BaseRing, InvariantFactorProfile};
use crate::error::{Error, Result};
use crate::graded::{PresentedRing, RingDescription};
use crate::models::{
    HoveyPresentation, critical_degree, mo8_case1_model, mo8_indecomposable_profile,
    mo8_rational, mspin_demo, tmf_model,
};
use crate::obstruction::{
    Candidate, ClaimBudget, ClaimReport, LocalSequence, Modification, NonIsoCertificate, RationalSequence,
    SequenceSource, VerificationReport, candidate_family, canonical_family, certify_family, classify_sequence,
    random_decomposable_tail, rational_witness, theorem_certify, verify_certificate, verify_claim,
};
use crate::quotient::{
    OrderPolicy, RegularityReport, SeqElement, SequenceSpec, TowerReport, is_regular_sequence, quotient_by_sequence,
    ring_module,
};

pub const DOCUMENT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Model,
    Quotient,
    Regular,
    Classify,
    Certify,
    Verify,
    Claim,
    DemoMspin,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Model => "model",
            Command::Quotient => "quotient",
            Command::Regular => "regular",
            Command::Classify => "classify",
            Command::Certify => "certify",
            Command::Verify => "verify",
            Command::Claim => "claim",
            Command::DemoMspin => "demo-mspin",
        }
    }
}

/// Which built-in ring a job works over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `Q[x2, x3, ...]`.
    Rational,
    /// `Q[x2, x3]` or `Z_(p)[x2, x3]`.
    Tmf,
    /// The p-local presentation with the torsion pair in degree `2(p + p^2)`.
    Local,
    /// `Z_(p)[x2, ..., x_{n-1}, u_n]`.
    Case1,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(ModelKind::Rational),
            "tmf" => Ok(ModelKind::Tmf),
            "local" => Ok(ModelKind::Local),
            "case1" => Ok(ModelKind::Case1),
            _ => Err(Error::Parse(format!("unknown model {s:?} (rational, tmf, local, case1)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Canonical,
    Full,
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(FamilyName::Canonical),
            "full" => Ok(FamilyName::Full),
            _ => Err(Error::Parse(format!("unknown family {s:?} (canonical, full)"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SequenceInput {
    #[default]
    None,
    Inline(Vec<String>),
    Family(FamilyName),
    /// A JSON array of `expr` / `expr@d` strings.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub model: Option<ModelKind>,
    /// A ring document; overrides `model`.
    pub ring_file: Option<PathBuf>,
    pub prime: Option<u64>,
    pub bound: Option<u32>,
    /// Decomposable part of the torsion-degree relation; `zero` or `0` for none.
    pub tail: Option<String>,
    /// Index `n` of the top generator for the `case1` model.
    pub index: Option<u32>,
    pub sequence: SequenceInput,
    pub order: OrderPolicy,
    /// Certificate or family document for `verify`.
    pub input: Option<PathBuf>,
    pub budget: ClaimBudget,
    /// Extra claim runs with random decomposable tails.
    pub random_tails: usize,
    pub verbosity: u8,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            model: None,
            ring_file: None,
            prime: None,
            bound: None,
            tail: None,
            index: None,
            sequence: SequenceInput::None,
            order: OrderPolicy::Sort,
            input: None,
            budget: ClaimBudget::default(),
            random_tails: 0,
            verbosity: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(d) = self.bound {
            if d < 8 || d % 2 != 0 {
                return Err(Error::InvalidModel(format!("D must be even and at least 8, got {d}")));
            }
        }
        if let Some(p) = self.prime {
            BaseRing::local(p)?;
        }
        Ok(())
    }

    fn prime(&self) -> Result<u64> {
        self.prime.ok_or_else(|| Error::InvalidModel(format!("{} needs --p", self.command.name())))
    }

    fn bound_or(&self, default: u32) -> u32 {
        self.bound.unwrap_or(default)
    }

    fn tail(&self) -> String {
        match self.tail.as_deref() {
            None | Some("zero") => "0".into(),
            Some(t) => t.into(),
        }
    }

    fn elements(&self) -> Result<Option<Vec<String>>> {
        match &self.sequence {
            SequenceInput::None => Ok(None),
            SequenceInput::Inline(xs) => Ok(Some(xs.clone())),
            SequenceInput::Family(FamilyName::Canonical) => {
                let p = self.prime()?;
                Ok(Some(LocalSequence::canonical(p, self.bound_or(critical_degree(p))).elements))
            }
            SequenceInput::Family(FamilyName::Full) => {
                Err(Error::InvalidSequence("the full family is only available to certify".into()))
            }
            SequenceInput::File(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text)
                    .map(Some)
                    .map_err(|e| Error::Document(format!("{}: expected a JSON array of strings ({e})", path.display())))
            }
        }
    }

    fn require_elements(&self) -> Result<Vec<String>> {
        self.elements()?
            .ok_or_else(|| Error::InvalidSequence(format!("{} needs a sequence (--seq, --family or --seq-file)", self.command.name())))
    }

    fn local_sequence(&self, elements: Vec<String>) -> Result<LocalSequence> {
        let p = self.prime()?;
        Ok(LocalSequence { prime: p, bound: self.bound_or(critical_degree(p)), tail: self.tail(), elements })
    }

    /// The ring a `model` / `quotient` / `regular` job works over.
    fn ring(&self) -> Result<Arc<PresentedRing>> {
        if let Some(path) = &self.ring_file {
            return Ok(Arc::new(RingDescription::from_json(&std::fs::read_to_string(path)?)?.build()?));
        }
        let kind = self.model.unwrap_or(if self.prime.is_some() { ModelKind::Local } else { ModelKind::Rational });
        match kind {
            ModelKind::Rational => Ok(Arc::new(mo8_rational(self.bound_or(24))?)),
            ModelKind::Tmf => {
                let base = match self.prime {
                    Some(p) => BaseRing::local(p)?,
                    None => BaseRing::Rational,
                };
                Ok(tmf_model(base, self.bound_or(24))?.ring)
            }
            ModelKind::Local => Ok(self.local_sequence(Vec::new())?.presentation()?.ring),
            ModelKind::Case1 => {
                let p = self.prime()?;
                let n = self.index.ok_or_else(|| Error::InvalidModel("case1 needs --index".into()))?;
                Ok(Arc::new(mo8_case1_model(p, n, self.bound_or(4 * n))?))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    Failure = 1,
    Usage = 2,
    Refusal = 3,
    Unsound = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: ExitStatus,
    pub document: String,
    /// One line for the terminal.
    pub summary: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary)
    }
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    schema_version: u32,
    command: &'a str,
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    required_bound: Option<u32>,
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

fn ok(document: String, summary: impl Into<String>) -> Outcome {
    Outcome { status: ExitStatus::Ok, document, summary: summary.into() }
}

/// Run one job. Errors become an error document with the matching exit status.
pub fn run(job: &JobSpec) -> Outcome {
    match job.validate().and_then(|()| dispatch(job)) {
        Ok(outcome) => outcome,
        Err(e) => error_outcome(job.command, &e),
    }
}

fn error_outcome(command: Command, e: &Error) -> Outcome {
    let (status, kind, required_bound) = match e {
        Error::Refusal { required_bound, .. } => (ExitStatus::Refusal, "refusal", *required_bound),
        Error::Consistency(_) => (ExitStatus::Failure, "internal", None),
        Error::Io(_) => (ExitStatus::Usage, "io", None),
        _ => (ExitStatus::Usage, "invalid_input", None),
    };
    let doc = ErrorDocument {
        schema_version: DOCUMENT_SCHEMA_VERSION,
        command: command.name(),
        error: kind,
        message: e.to_string(),
        required_bound,
    };
    let summary = match required_bound {
        Some(b) => format!("{}: {e} (required bound {b})", command.name()),
        None => format!("{}: {e}", command.name()),
    };
    Outcome { status, document: pretty(&doc), summary }
}

fn dispatch(job: &JobSpec) -> Result<Outcome> {
    match job.command {
        Command::Model => model(job),
        Command::Quotient => quotient(job),
        Command::Regular => regular(job),
        Command::Classify => classify(job),
        Command::Certify => certify(job),
        Command::Verify => verify(job),
        Command::Claim => claim(job),
        Command::DemoMspin => demo_mspin(job),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndecomposableEntry {
    pub degree: u32,
    pub computed: InvariantFactorProfile,
    pub expected: InvariantFactorProfile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub schema_version: u32,
    pub ring: RingDescription,
    pub hilbert: Vec<usize>,
    /// Indecomposables of the p-local presentation in degrees `4k`, with the closed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indecomposables: Option<Vec<IndecomposableEntry>>,
}

fn model(job: &JobSpec) -> Result<Outcome> {
    let ring = job.ring()?;
    let hilbert = (0..=ring.truncation()).map(|d| ring.dimension(d)).collect::<Result<_>>()?;
    let local = job.ring_file.is_none() && matches!(job.model, Some(ModelKind::Local) | None) && job.prime.is_some();
    let indecomposables = if local {
        let p = job.prime()?;
        let entries = (4..=ring.truncation() / 4)
            .map(|k| {
                Ok(IndecomposableEntry {
                    degree: 4 * k,
                    computed: ring.indecomposable_quotient(4 * k)?,
                    expected: mo8_indecomposable_profile(p, 4 * k)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Some(entries)
    } else {
        None
    };
    let mismatches = indecomposables.iter().flatten().filter(|e| e.computed != e.expected).count();
    let report = ModelReport { schema_version: DOCUMENT_SCHEMA_VERSION, ring: RingDescription::of(&ring), hilbert, indecomposables };
    let summary = format!(
        "model over {} with {} generators through degree {}",
        ring.base(),
        ring.ngens(),
        ring.truncation()
    );
    if mismatches > 0 {
        return Ok(Outcome {
            status: ExitStatus::Unsound,
            document: pretty(&report),
            summary: format!("{summary}; {mismatches} indecomposable degrees disagree with the closed form"),
        });
    }
    Ok(ok(pretty(&report), summary))
}

fn tower_inputs(job: &JobSpec) -> Result<(crate::quotient::GradedModule, SequenceSpec)> {
    let ring = job.ring()?;
    let elements = job.require_elements()?;
    let spec = SequenceSpec::parse(&ring, &elements)?;
    Ok((ring_module(&ring)?, spec))
}

fn quotient(job: &JobSpec) -> Result<Outcome> {
    let (m, spec) = tower_inputs(job)?;
    let tower = quotient_by_sequence(&m, &spec, job.order)?;
    let report = TowerReport::of(&tower);
    let summary = format!(
        "{} stages, {}regular, digest {}",
        tower.stages.len(),
        if tower.is_regular() { "" } else { "not " },
        report.digest()
    );
    Ok(ok(report.to_json(), summary))
}

#[derive(Serialize)]
struct RegularDocument {
    schema_version: u32,
    #[serde(flatten)]
    report: RegularityReport,
}

fn regular(job: &JobSpec) -> Result<Outcome> {
    let (m, spec) = tower_inputs(job)?;
    let report = is_regular_sequence(&m, &spec)?;
    let summary = match &report.failure {
        None => format!("regular through degree {}", report.checked_through),
        Some(f) => format!("not regular: element {} ({}) at degree {}", f.index, f.element, f.degree),
    };
    Ok(ok(pretty(&RegularDocument { schema_version: DOCUMENT_SCHEMA_VERSION, report }), summary))
}

#[derive(Serialize)]
struct ClassifyDocument {
    schema_version: u32,
    #[serde(flatten)]
    classification: crate::obstruction::SequenceClassification,
    /// Rational images when the input was p-local.
    #[serde(skip_serializing_if = "Option::is_none")]
    rationalized: Option<Vec<String>>,
}

fn classify(job: &JobSpec) -> Result<Outcome> {
    let elements = job.require_elements()?;
    let (ring, xs, rationalized) = if job.prime.is_some() {
        let (ring, xs) = job.local_sequence(elements)?.rationalized()?;
        let images = xs.iter().map(|x| x.format(&ring)).collect();
        (ring, xs, Some(images))
    } else {
        let seq = RationalSequence { bound: job.bound_or(24), elements };
        let ring = seq.ring()?;
        let xs = seq.parse(&ring)?;
        (ring, xs, None)
    };
    let classification = classify_sequence(&ring, &xs, ring.truncation())?;
    let summary = match (classification.case, classification.degree) {
        (Some(case), Some(d)) => format!("violation {} in degree {d}", case.label()),
        _ => format!("conforming through degree {}", classification.checked_through),
    };
    Ok(ok(pretty(&ClassifyDocument { schema_version: DOCUMENT_SCHEMA_VERSION, classification, rationalized }), summary))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub label: String,
    pub modification: Modification,
    pub sequence: LocalSequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<NonIsoCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub schema_version: u32,
    pub prime: u64,
    pub family: FamilyName,
    pub certified: usize,
    pub refused: usize,
    pub failed: usize,
    pub entries: Vec<FamilyEntry>,
}

impl FamilyReport {
    pub fn build(prime: u64, family: FamilyName, candidates: Vec<Candidate>) -> Self {
        let results = certify_family(&candidates);
        let entries: Vec<FamilyEntry> = candidates
            .into_iter()
            .zip(results)
            .map(|(c, r)| {
                let mut entry = FamilyEntry {
                    label: c.label,
                    modification: c.modification,
                    sequence: c.sequence,
                    certificate: None,
                    refusal: None,
                    error: None,
                };
                match r {
                    Ok(cert) => entry.certificate = Some(cert),
                    Err(Error::Refusal { reason, .. }) => entry.refusal = Some(reason),
                    Err(e) => entry.error = Some(e.to_string()),
                }
                entry
            })
            .collect();
        let count = |f: fn(&FamilyEntry) -> bool| entries.iter().filter(|e| f(e)).count();
        FamilyReport {
            schema_version: DOCUMENT_SCHEMA_VERSION,
            prime,
            family,
            certified: count(|e| e.certificate.is_some()),
            refused: count(|e| e.refusal.is_some()),
            failed: count(|e| e.error.is_some()),
            entries,
        }
    }
}

fn certify(job: &JobSpec) -> Result<Outcome> {
    if let SequenceInput::Family(name) = job.sequence {
        let p = job.prime()?;
        let top = critical_degree(p);
        if job.bound.is_some_and(|d| d != top) {
            return Err(Error::InvalidModel(format!("candidate families live in degree D = {top}")));
        }
        let candidates = match name {
            FamilyName::Canonical => canonical_family(p)?,
            FamilyName::Full => candidate_family(p)?,
        };
        if name == FamilyName::Canonical {
            let cert = theorem_certify(&candidates[0].sequence)?;
            return Ok(ok(cert.to_json(), certificate_summary(&cert)));
        }
        let report = FamilyReport::build(p, name, candidates);
        let status = if report.failed > 0 {
            ExitStatus::Failure
        } else if report.refused > 0 {
            ExitStatus::Refusal
        } else {
            ExitStatus::Ok
        };
        let summary = format!(
            "{} candidates: {} certified, {} refused, {} failed",
            report.entries.len(),
            report.certified,
            report.refused,
            report.failed
        );
        return Ok(Outcome { status, document: pretty(&report), summary });
    }
    let elements = job.require_elements()?;
    let cert = if job.prime.is_some() {
        theorem_certify(&job.local_sequence(elements)?)?
    } else {
        rational_witness(&SequenceSource::Rational(RationalSequence { bound: job.bound_or(24), elements }))?
    };
    Ok(ok(cert.to_json(), certificate_summary(&cert)))
}

fn certificate_summary(cert: &NonIsoCertificate) -> String {
    match &cert.witness_expression {
        Some(w) => format!("{:?} certificate in degree {}: witness {w}", cert.branch, cert.degree),
        None => format!("{:?} certificate: surjectivity fails in degree {}", cert.branch, cert.degree),
    }
}

#[derive(Serialize)]
struct VerifyDocument {
    schema_version: u32,
    sound: bool,
    entries: Vec<VerifyEntry>,
}

#[derive(Serialize)]
struct VerifyEntry {
    label: String,
    #[serde(flatten)]
    report: VerificationReport,
}

fn check(cert: &NonIsoCertificate) -> VerificationReport {
    verify_certificate(cert)
        .unwrap_or_else(|e| VerificationReport { sound: false, discrepancies: vec![format!("re-check failed: {e}")] })
}

fn verify(job: &JobSpec) -> Result<Outcome> {
    let path = job.input.as_ref().ok_or_else(|| Error::InvalidModel("verify needs a certificate file".into()))?;
    let text = std::fs::read_to_string(path)?;
    let entries = if let Ok(family) = serde_json::from_str::<FamilyReport>(&text) {
        family
            .entries
            .iter()
            .map(|e| VerifyEntry {
                label: e.label.clone(),
                report: match &e.certificate {
                    Some(c) => check(c),
                    None => VerificationReport { sound: false, discrepancies: vec!["no certificate".into()] },
                },
            })
            .collect()
    } else {
        let report = match NonIsoCertificate::from_json(&text) {
            Ok(cert) => check(&cert),
            Err(e) => VerificationReport { sound: false, discrepancies: vec![format!("malformed certificate: {e}")] },
        };
        vec![VerifyEntry { label: path.display().to_string(), report }]
    };
    let sound = entries.iter().all(|e| e.report.sound);
    let bad = entries.iter().filter(|e| !e.report.sound).count();
    let doc = VerifyDocument { schema_version: DOCUMENT_SCHEMA_VERSION, sound, entries };
    let summary = if sound {
        format!("{} certificate(s) sound", doc.entries.len())
    } else {
        format!("{bad} of {} certificate(s) unsound", doc.entries.len())
    };
    Ok(Outcome { status: if sound { ExitStatus::Ok } else { ExitStatus::Unsound }, document: pretty(&doc), summary })
}

#[derive(Serialize)]
struct ClaimSuite {
    schema_version: u32,
    passed: bool,
    reports: Vec<ClaimReport>,
}

fn claim(job: &JobSpec) -> Result<Outcome> {
    let p = job.prime()?;
    let free = HoveyPresentation::free_ring(p, critical_degree(p))?;
    let tail = free.parse(&job.tail())?;
    let mut reports = vec![verify_claim(p, (!tail.is_zero()).then_some(tail), &job.budget)?];
    let mut rng = ChaCha8Rng::seed_from_u64(job.budget.seed);
    for _ in 0..job.random_tails {
        let tail = random_decomposable_tail(p, &mut rng, 3)?;
        reports.push(verify_claim(p, Some(tail.scale(&crate::coeffs::Scalar::from_int(free.base(), p as i64))), &job.budget)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    let cells: usize = reports.iter().map(|r| r.cells.len()).sum();
    let partial = reports.iter().any(|r| r.partial);
    let summary = format!(
        "{} report(s), {cells} cells, {}{}",
        reports.len(),
        if passed { "all passing" } else { "FAILURES" },
        if partial { " (partial: budget exhausted)" } else { "" }
    );
    let document = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        pretty(&ClaimSuite { schema_version: DOCUMENT_SCHEMA_VERSION, passed, reports })
    };
    Ok(Outcome { status: if passed { ExitStatus::Ok } else { ExitStatus::Unsound }, document, summary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MSpinReport {
    pub schema_version: u32,
    pub bound: u32,
    pub sequence: Vec<String>,
    /// Every sequence element maps to zero under the genus.
    pub in_kernel: bool,
    pub regularity: RegularityReport,
    pub quotient_dimensions: Vec<usize>,
    pub target_hilbert: Vec<usize>,
    pub matches: bool,
}

pub fn mspin_report(bound: u32) -> Result<MSpinReport> {
    let demo = mspin_demo(bound)?;
    let xs: Vec<SeqElement> =
        demo.kernel_sequence.iter().map(|x| SeqElement::new(&demo.source, x.clone())).collect::<Result<_>>()?;
    let in_kernel = demo.kernel_sequence.iter().map(|x| demo.genus.apply(x)).collect::<Result<Vec<_>>>()?.iter().all(|y| y.is_zero());
    let m = ring_module(&demo.source)?;
    let spec = SequenceSpec::Finite(xs);
    let regularity = is_regular_sequence(&m, &spec)?;
    let tower = quotient_by_sequence(&m, &spec, OrderPolicy::Sort)?;
    let profile = tower.final_profile();
    let quotient_dimensions: Vec<usize> = (0..=bound).map(|d| profile.get(d).free_rank).collect();
    let target_hilbert: Vec<usize> = (0..=bound).map(|d| demo.target.dimension(d)).collect::<Result<_>>()?;
    Ok(MSpinReport {
        schema_version: DOCUMENT_SCHEMA_VERSION,
        bound,
        sequence: demo.kernel_sequence.iter().map(|x| demo.source.format(x)).collect(),
        in_kernel,
        matches: quotient_dimensions == target_hilbert,
        regularity,
        quotient_dimensions,
        target_hilbert,
    })
}

fn demo_mspin(job: &JobSpec) -> Result<Outcome> {
    let report = mspin_report(job.bound_or(24))?;
    let good = report.in_kernel && report.regularity.regular && report.matches;
    let summary = format!(
        "kernel sequence of length {} is {}regular through {}; quotient {} the target Hilbert series",
        report.sequence.len(),
        if report.regularity.regular { "" } else { "not " },
        report.bound,
        if report.matches { "matches" } else { "does not match" }
    );
    Ok(Outcome { status: if good { ExitStatus::Ok } else { ExitStatus::Unsound }, document: pretty(&report), summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: Command) -> JobSpec {
        JobSpec::new(command)
    }

    #[test]
    fn model_document() {
        let mut j = job(Command::Model);
        j.prime = Some(5);
        let out = run(&j);
        assert_eq!(out.status, ExitStatus::Ok, "{}", out.document);
        let report: ModelReport = serde_json::from_str(&out.document).unwrap();
        let torsion: Vec<u32> =
            report.indecomposables.unwrap().iter().filter(|e| !e.computed.torsion.is_empty()).map(|e| e.degree).collect();
        assert_eq!(torsion, vec![60]);
    }

    #[test]
    fn usage_and_refusal_codes() {
        let mut j = job(Command::Certify);
        j.prime = Some(5);
        j.bound = Some(40);
        j.sequence = SequenceInput::Family(FamilyName::Canonical);
        assert_eq!(run(&j).status, ExitStatus::Usage);
        j.sequence = SequenceInput::Inline(LocalSequence::canonical(5, 40).elements);
        let out = run(&j);
        assert_eq!(out.status, ExitStatus::Refusal);
        assert!(out.document.contains("\"required_bound\": 60"));
        j.bound = Some(41);
        assert_eq!(run(&j).status, ExitStatus::Usage);
        j.bound = Some(40);
        j.prime = Some(9);
        assert_eq!(run(&j).status, ExitStatus::Usage);
    }

    #[test]
    fn classify_and_regular() {
        let mut j = job(Command::Classify);
        j.sequence = SequenceInput::Inline(vec!["x2".into(), "x4".into()]);
        let out = run(&j);
        assert!(out.document.contains("\"low_degree\""), "{}", out.document);
        let mut j = job(Command::Regular);
        j.sequence = SequenceInput::Inline(vec!["x2".into(), "x2^2".into()]);
        let out = run(&j);
        assert!(out.document.contains("\"regular\": false"));
    }

    #[test]
    fn mspin() {
        let r = mspin_report(24).unwrap();
        assert!(r.in_kernel && r.regularity.regular && r.matches);
        assert_eq!(r.target_hilbert[..9], [1, 0, 0, 0, 1, 0, 0, 0, 2]);
    }
}
