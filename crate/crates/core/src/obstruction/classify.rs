use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeffs::BaseRing;
use crate::error::{Error, Result};
use crate::graded::PresentedRing;
use crate::quotient::SeqElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCase {
    /// An element in degree below 16.
    LowDegree,
    /// No element in some degree `4n >= 16`.
    MissingDegree,
    /// An element that is zero rationally.
    RationallyTrivial,
    /// A nonzero element in the square of the augmentation ideal.
    RationallyDecomposable,
    /// A second indecomposable in the same degree.
    ExtraIndecomposable,
}

impl ViolationCase {
    pub const ALL: [ViolationCase; 5] = [
        ViolationCase::LowDegree,
        ViolationCase::MissingDegree,
        ViolationCase::RationallyTrivial,
        ViolationCase::RationallyDecomposable,
        ViolationCase::ExtraIndecomposable,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ViolationCase::LowDegree => "(1)",
            ViolationCase::MissingDegree => "(2)",
            ViolationCase::RationallyTrivial => "(3a)",
            ViolationCase::RationallyDecomposable => "(3b)",
            ViolationCase::ExtraIndecomposable => "(3c)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Conforming,
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceClassification {
    pub verdict: Verdict,
    pub case: Option<ViolationCase>,
    /// Least degree in which the shape fails.
    pub degree: Option<u32>,
    /// Position (from 1) of the offending element in degree order.
    pub position: Option<usize>,
    pub element: Option<String>,
    pub checked_through: u32,
}

impl SequenceClassification {
    pub fn is_conforming(&self) -> bool {
        self.verdict == Verdict::Conforming
    }
}

/// Stable sort by degree, keeping elements of degree `<= bound`.
pub(crate) fn degree_sorted(xs: &[SeqElement], bound: u32) -> Vec<SeqElement> {
    let mut sorted: Vec<SeqElement> = xs.iter().filter(|x| x.degree <= bound).cloned().collect();
    sorted.sort_by_key(|x| x.degree);
    sorted
}

/// Check the shape "one rationally indecomposable element in each degree `4n >= 16`, nothing else"
/// through `bound`, reporting the lowest-degree failure.
pub fn classify_sequence(ring: &PresentedRing, xs: &[SeqElement], bound: u32) -> Result<SequenceClassification> {
    if ring.base() != BaseRing::Rational || !ring.relations().is_empty() {
        return Err(Error::InvalidRing("classification needs a polynomial ring over Q".into()));
    }
    if let Some(x) = xs.iter().find(|x| x.degree < 4) {
        return Err(Error::InvalidSequence(format!("element {} of degree {} below 4", x.format(ring), x.degree)));
    }
    let bound = bound.min(ring.truncation());
    let sorted = degree_sorted(xs, bound);
    let mut by_degree: BTreeMap<u32, Vec<(usize, &SeqElement)>> = BTreeMap::new();
    for (i, x) in sorted.iter().enumerate() {
        by_degree.entry(x.degree).or_default().push((i + 1, x));
    }
    let mut degrees: Vec<u32> = by_degree.keys().copied().chain((16..=bound).step_by(4)).collect();
    degrees.sort_unstable();
    degrees.dedup();

    let violation = |case, degree, at: Option<(usize, &SeqElement)>| SequenceClassification {
        verdict: Verdict::Violation,
        case: Some(case),
        degree: Some(degree),
        position: at.map(|(i, _)| i),
        element: at.map(|(_, x)| x.format(ring)),
        checked_through: bound,
    };
    for d in degrees {
        let here = by_degree.get(&d).map(Vec::as_slice).unwrap_or_default();
        if d < 16 {
            if let Some(&first) = here.iter().find(|(_, x)| !x.is_zero()).or(here.first()) {
                return Ok(violation(ViolationCase::LowDegree, d, Some(first)));
            }
            continue;
        }
        if d % 4 != 0 {
            return Ok(violation(ViolationCase::RationallyTrivial, d, here.first().copied()));
        }
        let Some((&first, rest)) = here.split_first() else {
            return Ok(violation(ViolationCase::MissingDegree, d, None));
        };
        for (k, &(i, x)) in std::iter::once(&first).chain(rest).enumerate() {
            let case = if x.is_zero() {
                ViolationCase::RationallyTrivial
            } else if x.element.linear_part().is_zero() {
                ViolationCase::RationallyDecomposable
            } else if k > 0 {
                ViolationCase::ExtraIndecomposable
            } else {
                continue;
            };
            return Ok(violation(case, d, Some((i, x))));
        }
    }
    Ok(SequenceClassification {
        verdict: Verdict::Conforming,
        case: None,
        degree: None,
        position: None,
        element: None,
        checked_through: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::mo8_rational;

    fn classify(xs: &[&str], bound: u32) -> SequenceClassification {
        let r = mo8_rational(bound).unwrap();
        let xs: Vec<SeqElement> = xs.iter().map(|e| SeqElement::parse(&r, e).unwrap()).collect();
        classify_sequence(&r, &xs, bound).unwrap()
    }

    fn generators(from: u32, to: u32) -> Vec<String> {
        (from..=to).map(|k| format!("x{k}")).collect()
    }

    #[test]
    fn conforming() {
        let xs = generators(4, 10);
        let refs: Vec<&str> = xs.iter().map(String::as_str).collect();
        assert!(classify(&refs, 40).is_conforming());
        assert!(classify(&["x4", "x5 + x2*x3", "3*x6 - x2^3"], 24).is_conforming());
        assert!(classify(&[], 12).is_conforming());
    }

    #[test]
    fn cases() {
        let c = classify(&["x2", "x4"], 24);
        assert_eq!((c.case, c.degree, c.position), (Some(ViolationCase::LowDegree), Some(8), Some(1)));
        let c = classify(&["x4", "x6"], 24);
        assert_eq!((c.case, c.degree, c.position), (Some(ViolationCase::MissingDegree), Some(20), None));
        let c = classify(&["x2^2", "x5"], 24);
        assert_eq!((c.case, c.degree), (Some(ViolationCase::RationallyDecomposable), Some(16)));
        let c = classify(&["x4", "0@20", "x5"], 24);
        assert_eq!((c.case, c.degree), (Some(ViolationCase::RationallyTrivial), Some(20)));
        let c = classify(&["x4", "x4 + x2^2", "x5"], 24);
        assert_eq!((c.case, c.degree, c.position), (Some(ViolationCase::ExtraIndecomposable), Some(16), Some(2)));
        let c = classify(&["x4", "0@18", "x5"], 24);
        assert_eq!((c.case, c.degree), (Some(ViolationCase::RationallyTrivial), Some(18)));
        let c = classify(&["x4", "0@10"], 24);
        assert_eq!((c.case, c.degree), (Some(ViolationCase::LowDegree), Some(10)));
    }

    #[test]
    fn least_degree_wins() {
        let c = classify(&["x4", "x2^3*x3", "x5", "x2"], 36);
        assert_eq!((c.case, c.degree), (Some(ViolationCase::LowDegree), Some(8)));
        let c = classify(&["x5", "x2^2"], 24);
        assert_eq!((c.case, c.degree, c.position), (Some(ViolationCase::RationallyDecomposable), Some(16), Some(1)));
    }
}
