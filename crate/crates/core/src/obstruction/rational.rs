use super::certificate::{
    Branch, CERTIFICATE_SCHEMA_VERSION, CertificateKind, NonIsoCertificate, evaluate_pair, quotient_evaluation_exact,
    surjectivity_data,
};
use super::classify::{ViolationCase, classify_sequence, degree_sorted};
use super::source::{BuiltModel, CertificateModel, SequenceSource};
use crate::error::{Error, Result};
use crate::graded::{PresentedRing, RingElement};
use crate::models::tmf_model;
use crate::quotient::{QuotientTower, SeqElement, TowerReport};

enum Recipe {
    Witness(RingElement),
    Surjectivity(u32),
}

/// Certificate for a sequence whose rationalization fails the required shape.
///
/// Refuses conforming sequences, which carry no rational obstruction.
pub fn rational_witness(source: &SequenceSource) -> Result<NonIsoCertificate> {
    let (ring, xs) = source.rational_view()?;
    let bound = ring.truncation();
    let class = classify_sequence(&ring, &xs, bound)?;
    let (Some(case), Some(d)) = (class.case, class.degree) else {
        return Err(Error::refusal(format!(
            "sequence has the required shape through degree {bound}; no rational obstruction"
        )));
    };
    let model_bound = (d + 2).next_multiple_of(2).max(8);
    let model = CertificateModel::Rational { bound: model_bound };
    let built = model.build(source)?;
    let tower = built.tower()?;
    let sorted = degree_sorted(&built.sequence, model_bound);
    let position = class.position.map(|i| i - 1);
    let recipe = recipe(&built, &sorted, case, d, position)?;
    let cert = match recipe.and_then(|r| attempt(source, &model, &built, &tower, case, r)) {
        Some(c) => c,
        None => fallback(source, &model, &built, &tower, case)?,
    };
    Ok(cert)
}

fn recipe(
    built: &BuiltModel,
    sorted: &[SeqElement],
    case: ViolationCase,
    d: u32,
    position: Option<usize>,
) -> Result<Option<Recipe>> {
    let ring = &built.ring;
    let tmf = tmf_model(ring.base(), ring.truncation())?;
    Ok(match case {
        ViolationCase::LowDegree => {
            let z = &sorted[position.expect("offending element")];
            Some(if z.is_zero() { Recipe::Surjectivity(d + 1) } else { Recipe::Witness(z.element.clone()) })
        }
        ViolationCase::MissingDegree => {
            let top = ring.generator_named(&format!("x{}", d / 4))?;
            let image = built.tmf.apply(&top)?;
            Some(Recipe::Witness(top.sub(&tmf.pull_back(ring, &image)?)))
        }
        ViolationCase::RationallyTrivial => Some(Recipe::Surjectivity(d + 1)),
        ViolationCase::RationallyDecomposable | ViolationCase::ExtraIndecomposable => {
            let at = position.expect("offending element");
            let z = &sorted[at];
            let earlier: Vec<RingElement> = sorted[..at].iter().map(|x| x.element.clone()).collect();
            match coset_polynomial(ring, &earlier, &z.element, d)? {
                Some(p) if p.is_zero() => Some(Recipe::Surjectivity(d + 1)),
                Some(_) if !built.tmf.apply(&z.element)?.is_zero() => Some(Recipe::Witness(z.element.clone())),
                _ => None,
            }
        }
    })
}

/// The polynomial in the degree-8 and degree-12 generators congruent to `z` modulo `earlier`.
fn coset_polynomial(ring: &PresentedRing, earlier: &[RingElement], z: &RingElement, d: u32) -> Result<Option<RingElement>> {
    let low: Vec<RingElement> = ring
        .monomials_of_degree(d)?
        .into_iter()
        .filter(|m| m.exponents()[2..].iter().all(|&e| e == 0))
        .map(|m| ring.monomial_element(m))
        .collect();
    let mut gens = earlier.to_vec();
    gens.extend(low.iter().cloned());
    let Some(coeffs) = ring.ideal_membership(&gens, z)? else { return Ok(None) };
    Ok(Some(ring.combine(&coeffs[earlier.len()..], &low)?))
}

fn attempt(
    source: &SequenceSource,
    model: &CertificateModel,
    built: &BuiltModel,
    tower: &QuotientTower,
    case: ViolationCase,
    recipe: Recipe,
) -> Option<NonIsoCertificate> {
    let header = |kind, degree| NonIsoCertificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        kind,
        prime: source.prime(),
        branch: Branch::Rational,
        case: Some(case),
        degree,
        source: source.clone(),
        model: model.clone(),
        witness_expression: None,
        evaluations: None,
        surjectivity: None,
        branch_check: None,
        tower_digest: TowerReport::of(tower).digest(),
        claim_report_digest: None,
    };
    match recipe {
        Recipe::Witness(w) => {
            let (w, _) = w.clear_denominators();
            let pair = evaluate_pair(built, tower, &w).ok()?;
            let sound = pair.quotient.vanishes != pair.tmf.vanishes
                && quotient_evaluation_exact(tower, pair.quotient.vanishes);
            sound.then(|| NonIsoCertificate {
                witness_expression: Some(built.ring.format(&w)),
                evaluations: Some(pair.clone()),
                ..header(CertificateKind::Witness, pair.quotient.degree)
            })
        }
        Recipe::Surjectivity(k) => {
            let data = surjectivity_data(built, &tower.final_module, k).ok()?;
            (!data.image_spans && data.tmf_surjective)
                .then(|| NonIsoCertificate { surjectivity: Some(data), ..header(CertificateKind::SurjectivityFailure, k) })
        }
    }
}

/// Any sequence element with nonzero tmf image, else the lowest degree where the unit map misses.
fn fallback(
    source: &SequenceSource,
    model: &CertificateModel,
    built: &BuiltModel,
    tower: &QuotientTower,
    case: ViolationCase,
) -> Result<NonIsoCertificate> {
    for x in &built.sequence {
        if x.is_zero() {
            continue;
        }
        if let Some(c) = attempt(source, model, built, tower, case, Recipe::Witness(x.element.clone())) {
            return Ok(c);
        }
    }
    for k in 1..=built.ring.truncation() {
        if let Some(c) = attempt(source, model, built, tower, case, Recipe::Surjectivity(k)) {
            return Ok(c);
        }
    }
    Err(Error::Consistency(format!("no rational certificate found for case {}", case.label())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstruction::certificate::verify_certificate;
    use crate::obstruction::source::RationalSequence;

    fn certify(xs: &[&str], bound: u32) -> NonIsoCertificate {
        let source = SequenceSource::Rational(RationalSequence {
            bound,
            elements: xs.iter().map(|s| s.to_string()).collect(),
        });
        let cert = rational_witness(&source).unwrap();
        let report = verify_certificate(&cert).unwrap();
        assert!(report.sound, "{:?}", report.discrepancies);
        cert
    }

    #[test]
    fn low_degree() {
        let c = certify(&["x2", "x4"], 24);
        assert_eq!(c.kind, CertificateKind::Witness);
        assert_eq!(c.witness_expression.as_deref(), Some("x2"));
        let e = c.evaluations.unwrap();
        assert!(e.quotient.vanishes && !e.tmf.vanishes);
        let c = certify(&["0@8"], 24);
        assert_eq!((c.kind, c.degree), (CertificateKind::SurjectivityFailure, 9));
    }

    #[test]
    fn missing_degree() {
        let c = certify(&["x5", "x6"], 24);
        assert_eq!(c.case, Some(ViolationCase::MissingDegree));
        assert_eq!(c.witness_expression.as_deref(), Some("-x2^2 + x4"));
        let e = c.evaluations.unwrap();
        assert!(!e.quotient.vanishes && e.tmf.vanishes);
    }

    #[test]
    fn trivial_and_decomposable() {
        let c = certify(&["x4", "0@20"], 24);
        assert_eq!((c.kind, c.degree), (CertificateKind::SurjectivityFailure, 21));
        let c = certify(&["x2^2", "x5"], 24);
        assert_eq!(c.case, Some(ViolationCase::RationallyDecomposable));
        assert_eq!(c.witness_expression.as_deref(), Some("x2^2"));
    }

    #[test]
    fn extra_indecomposable() {
        // The second element equals the first modulo nothing: trivial coset, split at 17.
        let c = certify(&["x4", "2*x4", "x5"], 24);
        assert_eq!((c.kind, c.degree), (CertificateKind::SurjectivityFailure, 17));
        assert!(!c.surjectivity.as_ref().unwrap().provenance.is_empty());
        // Nontrivial coset: the second element survives as x2^2.
        let c = certify(&["x4", "x4 + x2^2", "x5"], 24);
        assert_eq!(c.kind, CertificateKind::Witness);
    }

    #[test]
    fn conforming_is_refused() {
        let source = SequenceSource::Rational(RationalSequence { bound: 20, elements: vec!["x4".into(), "x5".into()] });
        assert!(matches!(rational_witness(&source), Err(Error::Refusal { .. })));
    }
}
