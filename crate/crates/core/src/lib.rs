//! Impartial selection on single-nomination graphs.
//!
//! Every vertex nominates exactly one other vertex, and a mechanism picks a
//! vertex at random so that no vertex can influence its own chance of being
//! picked. The crate provides exact rational evaluators and seeded samplers
//! for five mechanisms, named graph families, and verifiers for their
//! guarantees.

pub mod analysis;
pub mod distribution;
pub mod enumerate;
pub mod error;
pub mod generators;
pub mod graph;
pub mod mechanisms;
pub mod rng;

pub use distribution::{fmt_decimal, fmt_rational, parse_rational, ratio, Rational, SelectionDistribution};
pub use error::{Error, Result};
pub use generators::FamilySpec;
pub use graph::{NominationGraph, PartialNominationGraph, Permutation};
pub use mechanisms::{ExactConfig, MechanismId, PartialMechanism};
