use serde::{Deserialize, Serialize};

use super::certificate::{
    Branch, CERTIFICATE_SCHEMA_VERSION, CertificateKind, NonIsoCertificate, branch_check, evaluate_pair,
    quotient_evaluation_exact, regularity_ledger_digest,
};
use super::classify::{classify_sequence, degree_sorted};
use super::rational::rational_witness;
use super::source::{CertificateModel, LocalSequence, SequenceSource};
use crate::coeffs::InvariantFactorProfile;
use crate::error::{Error, Result};
use crate::graded::RingElement;
use crate::models::{HoveyPresentation, critical_degree, tmf_model};
use crate::quotient::{SeqElement, TowerReport};

/// The first sequence element that fails to generate its indecomposable group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingIndex {
    pub index: u32,
    pub degree: u32,
    pub element: String,
    /// Indecomposables in this degree.
    pub indecomposables: InvariantFactorProfile,
    /// Indecomposables modulo the element.
    pub cokernel: InvariantFactorProfile,
    /// Coefficients of the element on the degree's generators.
    pub coordinates: Vec<(String, String)>,
}

/// Least `n` such that the degree-`4n` element does not generate `Q_{4n}`; `None` if all generate through the bound.
///
/// The sequence must already have one element in each degree `4n >= 16`.
pub fn least_failing_index(h: &HoveyPresentation, xs: &[SeqElement]) -> Result<Option<FailingIndex>> {
    let ring = &h.ring;
    let bound = ring.truncation();
    let sorted = degree_sorted(xs, bound);
    for n in 4..=bound / 4 {
        let d = 4 * n;
        let here: Vec<&SeqElement> = sorted.iter().filter(|x| x.degree == d).collect();
        let [x] = here.as_slice() else {
            return Err(Error::InvalidSequence(format!("expected exactly one element in degree {d}, found {}", here.len())));
        };
        let cokernel = ring.indecomposable_lattice(d, std::slice::from_ref(&x.element))?.quotient_profile();
        if !cokernel.is_zero() {
            let linear = x.element.linear_part();
            let coordinates = linear
                .terms()
                .map(|(m, c)| (ring.format(&ring.monomial_element(m.clone())), c.to_string()))
                .collect();
            return Ok(Some(FailingIndex {
                index: n,
                degree: d,
                element: ring.format(&x.element),
                indecomposables: ring.indecomposable_quotient(d)?,
                cokernel,
                coordinates,
            }));
        }
    }
    if bound >= critical_degree(h.prime) {
        return Err(Error::Consistency(format!(
            "every element generates its indecomposables through degree {bound}, past the torsion degree"
        )));
    }
    Ok(None)
}

/// A certificate that `π_*(R/X)` is not `π_*tmf` as a module, for any sequence over the p-local model.
pub fn theorem_certify(input: &LocalSequence) -> Result<NonIsoCertificate> {
    let source = SequenceSource::Local(input.clone());
    let (qring, qxs) = input.rationalized()?;
    if !classify_sequence(&qring, &qxs, input.bound)?.is_conforming() {
        return rational_witness(&source);
    }
    let h = input.presentation()?;
    let xs = input.parse(&h)?;
    let top = critical_degree(input.prime);
    let Some(fail) = least_failing_index(&h, &xs)? else {
        return Err(Error::Refusal {
            reason: format!(
                "every element generates its indecomposables through degree {}; the first failure lies in degrees up to {top}",
                input.bound
            ),
            required_bound: Some(top),
        });
    };
    let n = fail.index;
    let (branch, model) = if fail.degree < top {
        (Branch::BelowCritical, CertificateModel::BelowCritical { prime: input.prime, index: n })
    } else {
        (Branch::Critical, CertificateModel::Critical { prime: input.prime, tail: input.tail.clone() })
    };
    let built = model.build(&source)?;
    let tower = built.tower()?;
    let check = branch_check(&built, &tower, fail.degree)?;
    if !(check.surjective && check.kernel_matches_ideal) {
        return Err(Error::Consistency(format!("unit map fails the kernel check: {check:?}")));
    }

    let ring = &built.ring;
    let survivor = match branch {
        Branch::BelowCritical => ring.generator(ring.ngens() - 1),
        _ => {
            let x = built.sequence.iter().find(|x| x.degree == fail.degree).expect("conforming");
            let lattice = ring.indecomposable_lattice(fail.degree, std::slice::from_ref(&x.element))?;
            let candidates = [h.y(), h.z()];
            let mut found = None;
            for u in candidates {
                if !lattice.contains(&ring.to_vector(&u, fail.degree)?) {
                    found = Some(u);
                    break;
                }
            }
            found.ok_or_else(|| Error::Consistency("both torsion-degree generators lie in the ideal".into()))?
        }
    };
    let tmf = tmf_model(ring.base(), ring.truncation())?;
    let w: RingElement = survivor.sub(&tmf.pull_back(ring, &built.tmf.apply(&survivor)?)?);
    let pair = evaluate_pair(&built, &tower, &w)?;
    if pair.quotient.vanishes || !pair.tmf.vanishes || !quotient_evaluation_exact(&tower, false) {
        return Err(Error::Consistency(format!("witness {} does not separate the modules", ring.format(&w))));
    }
    Ok(NonIsoCertificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        kind: CertificateKind::Witness,
        prime: Some(input.prime),
        branch,
        case: None,
        degree: fail.degree,
        source,
        model,
        witness_expression: Some(ring.format(&w)),
        evaluations: Some(pair),
        surjectivity: None,
        branch_check: Some(check),
        tower_digest: TowerReport::of(&tower).digest(),
        claim_report_digest: Some(regularity_ledger_digest(Some(input.prime), &tower)),
    })
}
