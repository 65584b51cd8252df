use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::module::GradedModule;
use super::stage::{SeqElement, StageStatus, quotient_by_element};
use super::tower::{QuotientTower, run_in_order};
use crate::error::Result;
use crate::graded::DegreeProfile;

/// Profiles of `M` and `M/x` agree strictly below `deg x`.
pub fn check_connectivity_lemma(m: &GradedModule, x: &SeqElement) -> Result<bool> {
    let (out, _) = quotient_by_element(m, x)?;
    let top = x.degree.min(m.bound() + 1);
    Ok((0..top).all(|k| m.profile(k) == out.profile(k)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderInvarianceReport {
    pub agree: bool,
    pub exhaustive: bool,
    pub permutations_checked: usize,
    /// First permutation (as positions into the input) whose profile differs.
    pub counterexample: Option<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Final profiles under reorderings of a finite sequence, stages run in exactly the permuted order.
/// Exhaustive for at most four elements, otherwise `trials` seeded random permutations.
pub fn check_order_invariance(
    m: &GradedModule,
    xs: &[SeqElement],
    trials: usize,
    seed: u64,
) -> Result<OrderInvarianceReport> {
    let kept: Vec<SeqElement> = xs.iter().filter(|x| x.degree <= m.bound()).cloned().collect();
    let exhaustive = kept.len() <= 4;
    let orders = if exhaustive {
        permutations(kept.len())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut base: Vec<usize> = (0..kept.len()).collect();
        let mut orders = vec![base.clone()];
        for _ in 0..trials {
            base.shuffle(&mut rng);
            orders.push(base.clone());
        }
        orders
    };
    let profile = |order: &[usize]| -> Result<DegreeProfile> {
        let seq: Vec<SeqElement> = order.iter().map(|&i| kept[i].clone()).collect();
        Ok(run_in_order(m, &seq, vec![], vec![], String::new(), false)?.final_profile())
    };
    let reference = profile(&orders[0])?;
    for (n, order) in orders.iter().enumerate().skip(1) {
        if profile(order)? != reference {
            return Ok(OrderInvarianceReport {
                agree: false,
                exhaustive,
                permutations_checked: n + 1,
                counterexample: Some(order.clone()),
            });
        }
    }
    Ok(OrderInvarianceReport { agree: true, exhaustive, permutations_checked: orders.len(), counterexample: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCriterion {
    pub index: usize,
    pub degree: u32,
    /// `None` when the degree lies above the bound.
    pub first_vanishes: Option<bool>,
    pub second_vanishes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraCriteria {
    pub stages: Vec<StageCriterion>,
    /// Every stage of degree `n` has zero output in degrees `n + 1` and `2n + 1` (where checkable).
    pub low_degrees_vanish: bool,
    /// Final profile lives in degrees divisible by 4 and every stage was regular.
    pub concentrated_mod4_regular: bool,
}

/// The two sufficient conditions for a quotient to carry a ring structure.
pub fn algebra_structure_criteria(tower: &QuotientTower) -> AlgebraCriteria {
    let bound = tower.bound();
    let vanishes = |p: &DegreeProfile, k: u32| (k <= bound).then(|| p.get(k).is_zero());
    let stages: Vec<StageCriterion> = tower
        .stages
        .iter()
        .map(|s| StageCriterion {
            index: s.index,
            degree: s.degree(),
            first_vanishes: vanishes(&s.output, s.degree() + 1),
            second_vanishes: vanishes(&s.output, 2 * s.degree() + 1),
        })
        .collect();
    let low_degrees_vanish =
        stages.iter().all(|c| c.first_vanishes != Some(false) && c.second_vanishes != Some(false));
    let final_profile = tower.final_profile();
    let concentrated = final_profile.0.iter().all(|(k, p)| k % 4 == 0 || p.is_zero());
    let regular = tower.stages.iter().all(|s| s.status == StageStatus::Regular);
    AlgebraCriteria { stages, low_degrees_vanish, concentrated_mod4_regular: concentrated && regular }
}
