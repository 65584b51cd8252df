use serde::{Deserialize, Serialize};

use super::ring::{Generator, PresentedRing};
use crate::coeffs::BaseRing;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON form of a [`PresentedRing`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescription {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub base: BaseRing,
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub truncation: u32,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl RingDescription {
    pub fn of(ring: &PresentedRing) -> Self {
        RingDescription {
            schema_version: SCHEMA_VERSION,
            base: ring.base(),
            generators: ring.generators().to_vec(),
            relations: ring.relations().iter().map(|r| ring.format(r)).collect(),
            truncation: ring.truncation(),
        }
    }

    pub fn build(&self) -> Result<PresentedRing> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!("unsupported schema_version {}", self.schema_version)));
        }
        let free = PresentedRing::polynomial(self.base, self.generators.clone(), self.truncation)?;
        let relations = self.relations.iter().map(|r| free.parse(r)).collect::<Result<_>>()?;
        PresentedRing::new(self.base, self.generators.clone(), relations, self.truncation)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
