use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::{BaseRing, Scalar};

/// Isomorphism type of a finitely generated module over a base ring:
/// a free part plus cyclic torsion summands `R/(p^e)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantFactorProfile {
    pub free_rank: usize,
    /// Torsion orders `p^e`, ascending.
    pub torsion: Vec<u64>,
}

impl InvariantFactorProfile {
    pub fn free(rank: usize) -> Self {
        InvariantFactorProfile { free_rank: rank, torsion: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands.
    pub fn generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Build from the nonzero invariant factors of a presentation matrix.
    pub(crate) fn from_factors<'a>(
        ring: BaseRing,
        rows: usize,
        factors: impl IntoIterator<Item = &'a Scalar>,
    ) -> Self {
        let mut rank = 0;
        let mut torsion = Vec::new();
        for f in factors {
            if f.is_zero() {
                continue;
            }
            rank += 1;
            if let (BaseRing::Local(p), Some(v)) = (ring, f.valuation()) {
                if v > 0 {
                    torsion.push(p.checked_pow(v).expect("torsion order overflows u64"));
                }
            }
        }
        torsion.sort_unstable();
        InvariantFactorProfile { free_rank: rows - rank, torsion }
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        torsion.sort_unstable();
        InvariantFactorProfile { free_rank: self.free_rank + other.free_rank, torsion }
    }

    /// Profile after tensoring with the fraction field.
    pub fn rationalized(&self) -> Self {
        Self::free(self.free_rank)
    }
}

impl fmt::Display for InvariantFactorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("R^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("R/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}
