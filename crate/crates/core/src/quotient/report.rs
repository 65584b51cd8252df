use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::module::Summand;
use super::stage::{KernelWitness, StageStatus};
use super::tower::{DroppedElement, QuotientTower};
use crate::coeffs::BaseRing;
use crate::graded::DegreeProfile;

pub const TOWER_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub index: usize,
    pub element: String,
    pub degree: u32,
    pub status: StageStatus,
    pub kernel: DegreeProfile,
    pub cokernel: DegreeProfile,
    pub output: DegreeProfile,
    pub witness: Option<KernelWitness>,
    pub non_canonical_torsion: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Serializable record of a tower: stages, profiles, dropped elements and flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub schema_version: u32,
    pub base: BaseRing,
    pub bound: u32,
    pub sequence: String,
    pub initial: DegreeProfile,
    pub stages: Vec<StageReport>,
    pub dropped: Vec<DroppedElement>,
    pub notices: Vec<String>,
    pub stability_bound: usize,
    pub summands: Vec<Summand>,
    #[serde(rename = "final")]
    pub final_profile: DegreeProfile,
}

impl TowerReport {
    pub fn of(tower: &QuotientTower) -> Self {
        TowerReport {
            schema_version: TOWER_SCHEMA_VERSION,
            base: tower.final_module.base(),
            bound: tower.bound(),
            sequence: tower.source.clone(),
            initial: tower.initial.clone(),
            stages: tower
                .stages
                .iter()
                .map(|s| StageReport {
                    index: s.index,
                    element: s.expression.clone(),
                    degree: s.degree(),
                    status: s.status,
                    kernel: s.kernel.clone(),
                    cokernel: s.cokernel.clone(),
                    output: s.output.clone(),
                    witness: s.witness.clone(),
                    non_canonical_torsion: s.non_canonical_torsion,
                    note: s.note.clone(),
                })
                .collect(),
            dropped: tower.dropped.clone(),
            notices: tower.notices.clone(),
            stability_bound: tower.stability_bound,
            summands: tower.final_module.summands().to_vec(),
            final_profile: tower.final_profile(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// SHA-256 of the compact JSON form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("report serializes")))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graded::{Generator, PresentedRing};
    use crate::quotient::{OrderPolicy, SequenceSpec, quotient_by_sequence, ring_module};

    #[test]
    fn report_round_trips_and_digest_is_stable() {
        let ring = PresentedRing::polynomial(BaseRing::Local(5), vec![Generator::new("a", 8)], 24).unwrap();
        let m = ring_module(&Arc::new(ring)).unwrap();
        let spec = SequenceSpec::parse(m.ring(), &["5*a", "0@8", "a^4"]).unwrap();
        let tower = quotient_by_sequence(&m, &spec, OrderPolicy::Sort).unwrap();
        let report = TowerReport::of(&tower);
        let back: TowerReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back.to_json(), report.to_json());
        assert_eq!(report.dropped.len(), 1);
        assert_eq!(report.digest(), TowerReport::of(&tower).digest());
        assert_eq!(report.digest().len(), 64);
    }
}
