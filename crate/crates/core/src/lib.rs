//! Exact census of short Weierstrass curves `y^2 = x^3 + Ax + B` with
//! `|A|, |B| <= M` that carry a rational point of prime order 2, 3, 5 or 7.

pub mod arith;
pub mod bounds;
pub mod census;
pub mod cli;
pub mod curve;
pub mod error;
pub mod families;
pub mod output;
pub mod torsion;

pub use census::{run_census, CensusConfig, CensusReport, CountMode};
pub use curve::{CurvePair, PointOrder, RationalPoint};
pub use error::{Error, Result};
pub use families::{CurveSet, FamilyCandidate, TorsionPrime};
pub use torsion::{torsion_subgroup, TorsionGroup, TorsionStructure};
