//! Commutative graded rings in even degrees, truncated at a fixed degree bound.

mod description;
mod element;
mod ideal;
mod map;
mod parse;
mod ring;

pub use description::{RingDescription, SCHEMA_VERSION};
pub use element::{Monomial, RingElement};
pub use ideal::IdealSpan;
pub use map::RingMap;
pub use ring::{DegreeBasis, DegreePiece, DegreeProfile, Generator, PresentedRing, Product};
